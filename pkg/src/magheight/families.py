"""Closed-form nu values and explicit maximal potentials for standard families."""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, complete, cycle, is_connected, is_forest, wheel
from .potential import MagneticPotential, anti_balanced, from_oriented, from_phases, trivial
from .spectra import lambda1

# S6 = {xi^l : l = 0..5} with xi = exp(i pi / 3)
XI6 = cmath.exp(1j * math.pi / 3)


class BadSize(ValueError):
    pass


class NotATree(ValueError):
    pass


@dataclass
class FamilyResult:
    name: str
    graph: Graph
    nu_exact: float
    maximal_potential: MagneticPotential
    predicted_spectrum: list[float] | None = None
    trivial: bool = False
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "family": self.name,
            "graph": self.graph.to_json(),
            "nu_exact": self.nu_exact,
            "maximal_potential": self.maximal_potential.to_json(),
            "predicted_spectrum": self.predicted_spectrum,
            "trivial": self.trivial,
        }
        out.update(self.extra)
        return out


def cycle_mu(d: int, t: float, j) -> np.ndarray:
    """mu_j(t) = 2 - 2 cos((t + 2 pi j) / d)."""
    return 2.0 - 2.0 * np.cos((t + 2.0 * math.pi * np.asarray(j)) / d)


def cycle_potential(d: int, t: float) -> MagneticPotential:
    """Angle t on the edge (d-2, d-1), trivial elsewhere."""
    g = cycle(d)
    return from_oriented(g, {(d - 2, d - 1): t})


def cycle_family(d: int) -> FamilyResult:
    if d < 3:
        raise BadSize(f"cycles need d >= 3, got {d}")
    spec = sorted(float(v) for v in cycle_mu(d, math.pi, np.arange(d)))
    return FamilyResult(f"cycle-{d}", cycle(d), 2 - 2 * math.cos(math.pi / d), cycle_potential(d, math.pi), spec)


def cycle_eigencurves(d: int, t_samples) -> np.ndarray:
    """Row per sample t, column j = 0..d-1 (unsorted, indexed by j)."""
    if d < 3:
        raise BadSize(f"cycles need d >= 3, got {d}")
    t = np.asarray(t_samples, dtype=float).reshape(-1, 1)
    return cycle_mu(d, t, np.arange(d)[None, :])


def complete_family(d: int) -> FamilyResult:
    if d < 2:
        raise BadSize(f"complete graphs need d >= 2, got {d}")
    g = complete(d)
    if d == 2:
        return FamilyResult("complete-2", g, 0.0, trivial(g), [0.0, 2.0])
    spec = [float(d - 2)] * (d - 1) + [float(2 * (d - 1))]
    return FamilyResult(f"complete-{d}", g, float(d - 2), anti_balanced(g), spec)


def wheel_k(d: int) -> int:
    """d = 2k for even d, d = 2k + 1 for odd d."""
    return d // 2


def wheel_potential(d: int) -> MagneticPotential:
    """Rim trivial except sigma(x_{d-1}, x_0) = -1; spokes sigma(x, x_j) = -(e^{-i(2k+1)pi/d})^j
    for every j. The hub x is vertex d.

    The spokes are minus the conjugate of the rim eigenfunction f_k(x_j) = z^j,
    z = e^{i(2k+1)pi/d}, so z^d = -1 closes the twisted rim. Writing the last
    spoke as -e^{i(2k+1)pi/d} instead flips its sign and breaks the block structure.
    """
    g = wheel(d)
    k = wheel_k(d)
    w = cmath.exp(-1j * (2 * k + 1) * math.pi / d)
    hub = d
    values = {(d - 1, 0): -1.0 + 0j}
    for j in range(d):
        values[(hub, j)] = -(w ** j)
    return from_phases(g, values)


def wheel_predicted_spectrum(d: int) -> list[float]:
    k = wheel_k(d)
    c = math.cos((2 * k + 1) * math.pi / d)
    rim = [float(1 + cycle_mu(d, math.pi, j)) for j in range(d) if j != k]
    b = d + 3 - 2 * c
    disc = math.sqrt(b * b - 4 * (2 - 2 * c) * d)
    return sorted(rim + [(b - disc) / 2, (b + disc) / 2])


def wheel_family(d: int) -> FamilyResult:
    if d < 3:
        raise BadSize(f"wheels need d >= 3, got {d}")
    return FamilyResult(f"wheel-{d}", wheel(d), 3 - 2 * math.cos(math.pi / d), wheel_potential(d),
                        wheel_predicted_spectrum(d))


def wheel_quadratic_roots(d: int) -> tuple[float, float]:
    k = wheel_k(d)
    c = math.cos((2 * k + 1) * math.pi / d)
    b = d + 3 - 2 * c
    disc = math.sqrt(b * b - 4 * (2 - 2 * c) * d)
    return (b - disc) / 2, (b + disc) / 2


# tree suspensions -------------------------------------------------------


def _s6(l: int) -> complex:
    return XI6 ** (l % 6)


def tree_s6_values(t: Graph) -> tuple[dict[tuple[int, int], int], list[int], int]:
    """Exponents l with b_{jk} = xi^l on tree edges (oriented parent -> child)
    and exponents of a_j = sum_k b_{jk} - b_{parent(j) j}. Returns (b, a, root)."""
    n = t.n_vertices
    if n < 2 or not is_connected(t) or not is_forest(t):
        raise NotATree("need a tree with at least two vertices")
    root = min(x for x in range(n) if t.degree(x) == 1)
    b: dict[tuple[int, int], int] = {}
    a = [0] * n
    incoming = [None] * n  # exponent of b_{parent, x}
    queue = deque([(root, -1)])
    while queue:
        x, parent = queue.popleft()
        children = sorted(y for y in t.neighbors(x) if y != parent)
        if parent == -1:
            # the root is a leaf with a single child
            b[(x, children[0])] = 0
            a[x] = 0
        else:
            m = incoming[x]
            pairs, leftover = children[: len(children) // 2 * 2], children[len(children) // 2 * 2:]
            for c1, c2 in zip(pairs[::2], pairs[1::2]):
                b[(x, c1)] = m
                b[(x, c2)] = m + 3
            if leftover:
                # xi^{m+1} - xi^m = xi^{m+2}
                b[(x, leftover[0])] = m + 1
                a[x] = m + 2
            else:
                a[x] = m + 3
        for y in children:
            b[(x, y)] %= 6
            incoming[y] = b[(x, y)]
            queue.append((y, x))
    return b, [l % 6 for l in a], root


def tree_suspension_potential(t: Graph) -> FamilyResult:
    """Suspension of t with the apex appended last; rim (tree) edges trivial and
    spoke sigma(x_j, apex) = a_j."""
    from .constructions import suspension

    n = t.n_vertices
    if n == 0 or not is_forest(t) or not is_connected(t):
        raise NotATree("input must be a nonempty tree")
    g = suspension(t)
    if n == 1:
        return FamilyResult("tree-suspension", g, 0.0, trivial(g), trivial=True)
    b, a_exp, root = tree_s6_values(t)
    a = [_s6(l) for l in a_exp]
    sigma = from_phases(g, {(j, n): a[j] for j in range(n)})
    extra = {
        "root": root,
        "b_exponents": {f"{u}-{v}": l for (u, v), l in sorted(b.items())},
        "a_exponents": a_exp,
        "sum_a_abs": abs(sum(a)),
    }
    return FamilyResult("tree-suspension", g, 1.0, sigma, None, False, extra)


def verify_family(res: FamilyResult, tol: float = 1e-9) -> bool:
    """lambda_1 of the maximal potential equals nu_exact, and the predicted spectrum matches."""
    from .spectra import eigenvalues

    if abs(lambda1(res.graph, res.maximal_potential) - res.nu_exact) > tol:
        return False
    if res.predicted_spectrum is not None:
        w = eigenvalues(res.graph, res.maximal_potential)
        if np.max(np.abs(np.sort(w) - np.sort(res.predicted_spectrum))) > tol:
            return False
    return True
