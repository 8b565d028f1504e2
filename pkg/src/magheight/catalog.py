"""Bundled fixture graphs and the explicit potentials attached to them."""

from __future__ import annotations

import cmath
import math
from importlib import resources

from .graph import Graph, from_edgelist, wheel
from .potential import MagneticPotential, anti_balanced, from_oriented, from_phases

FIXTURES = ("w6", "ghat", "triangle_dangling", "susp_p3", "petersen", "k4", "k5", "q3", "q4", "c5",
            "heawood", "pappus", "mcgee", "dumbbell_k5", "dumbbell_k6", "tree")

# edges of G-hat carrying -1 in its signature; every other edge carries +1
GHAT_NEGATIVE = ((0, 5), (0, 6), (1, 2), (1, 3), (2, 3), (5, 6))


def fixture_path(name: str):
    return resources.files("magheight") / "fixtures" / f"{name}.edges"


def fixture(name: str) -> Graph:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return from_edgelist(fixture_path(name).read_text())


def ghat_signature(g: Graph | None = None) -> MagneticPotential:
    g = g or fixture("ghat")
    return from_oriented(g, {e: math.pi for e in GHAT_NEGATIVE})


def triangle_dangling_potential(t: float) -> MagneticPotential:
    return from_oriented(fixture("triangle_dangling"), {(2, 3): t})


def susp_p3_potential(alpha: float, beta: float) -> MagneticPotential:
    """sigma(x2, x4) = e^{i alpha}, sigma(x3, x4) = e^{i beta}."""
    return from_oriented(fixture("susp_p3"), {(1, 3): alpha, (2, 3): beta})


def w4_potentials() -> dict[str, MagneticPotential]:
    """Anti-balanced, sigma1 and sigma-hat on W4; hub is vertex 4."""
    g = wheel(4)
    hub = 4
    sigma1 = {(0, 1): -1, (1, 2): -1, (2, 3): 1, (3, 0): -1}
    sigma1.update({(hub, j): 1 for j in range(4)})
    hat = {(0, 1): 1, (1, 2): 1, (2, 3): -1, (3, 0): 1,
           (hub, 0): -1, (hub, 1): cmath.exp(-1j * math.pi / 4), (hub, 2): 1j, (hub, 3): cmath.exp(1j * math.pi / 4)}
    return {
        "anti_balanced": anti_balanced(g),
        "sigma1": from_phases(g, {e: complex(v) for e, v in sigma1.items()}),
        "sigma_hat": from_phases(g, hat),
    }
