"""Magnetic potentials, gauge transformations and holonomy coordinates.

A potential is stored as one angle per canonical edge ``(u, v)``, ``u < v``;
the reversed orientation carries the negated angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .graph import ROOT, Graph, GraphError, SpanningForest, spanning_forest

TWO_PI = 2.0 * math.pi
CLASSIFY_TOL = 1e-12


class SizeMismatch(ValueError):
    pass


class NotAWalk(ValueError):
    pass


class NotASignature(ValueError):
    pass


def wrap(angles):
    """Reduce to [0, 2pi); values within 1e-12 of 2pi snap to 0."""
    a = np.mod(np.asarray(angles, dtype=float), TWO_PI)
    return np.where(TWO_PI - a < CLASSIFY_TOL, 0.0, a)


def angle_distance(a, b):
    """Distance on the circle between angles (elementwise)."""
    d = np.mod(np.asarray(a, dtype=float) - np.asarray(b, dtype=float), TWO_PI)
    return np.minimum(d, TWO_PI - d)


def _frozen(arr) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MagneticPotential:
    angles: np.ndarray

    def __init__(self, angles: Sequence[float]):
        object.__setattr__(self, "angles", _frozen(wrap(np.ravel(angles))))

    def __len__(self) -> int:
        return len(self.angles)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MagneticPotential) or len(self) != len(other):
            return NotImplemented
        return bool(np.all(angle_distance(self.angles, other.angles) <= CLASSIFY_TOL))

    @property
    def phases(self) -> np.ndarray:
        return np.exp(1j * self.angles)

    def oriented(self, g: Graph, u: int, v: int) -> float:
        """Angle of sigma(u, v)."""
        theta = self.angles[g.edge_index(u, v)]
        return float(theta) if u < v else float(-theta)

    def is_signature(self) -> bool:
        return is_sk_valued(self, 2)

    def to_json(self) -> dict:
        return {"angles": [float(a) for a in self.angles]}


@dataclass(frozen=True, eq=False)
class GaugeFunction:
    phases: np.ndarray

    def __init__(self, phases: Sequence[float]):
        arr = np.ravel(np.asarray(phases, dtype=float))
        if not np.all(np.isfinite(arr)):
            raise ValueError("gauge phases must be finite")
        object.__setattr__(self, "phases", _frozen(arr))


@dataclass(frozen=True, eq=False)
class HolonomyCoordinates:
    forest: SpanningForest
    phis: np.ndarray

    def __init__(self, forest: SpanningForest, phis: Sequence[float]):
        phis = np.ravel(np.asarray(phis, dtype=float))
        if len(phis) != len(forest.cotree):
            raise SizeMismatch(f"expected {len(forest.cotree)} holonomy angles, got {len(phis)}")
        object.__setattr__(self, "forest", forest)
        object.__setattr__(self, "phis", _frozen(wrap(phis)))

    def to_json(self) -> dict:
        return {"phis": [float(p) for p in self.phis]}


def trivial(g: Graph) -> MagneticPotential:
    return MagneticPotential(np.zeros(g.n_edges))


def anti_balanced(g: Graph) -> MagneticPotential:
    return MagneticPotential(np.full(g.n_edges, math.pi))


def from_oriented(g: Graph, values: Mapping[tuple[int, int], float], default: float = 0.0) -> MagneticPotential:
    """Build a potential from angles given on arbitrary orientations ``(u, v) -> angle of sigma(u, v)``."""
    angles = np.full(g.n_edges, float(default))
    for (u, v), theta in values.items():
        i = g.edge_index(u, v)
        angles[i] = theta if u < v else -theta
    return MagneticPotential(angles)


def from_phases(g: Graph, values: Mapping[tuple[int, int], complex]) -> MagneticPotential:
    """Like :func:`from_oriented` but with unit complex numbers; unspecified edges are trivial."""
    return from_oriented(g, {e: float(np.angle(z)) for e, z in values.items()})


def check_size(g: Graph, sigma: MagneticPotential) -> None:
    if len(sigma) != g.n_edges:
        raise SizeMismatch(f"potential has {len(sigma)} angles, graph has {g.n_edges} edges")


def gauge_transform(g: Graph, sigma: MagneticPotential, tau: GaugeFunction) -> MagneticPotential:
    """sigma^tau(x, y) = tau(x)^-1 sigma(x, y) tau(y)."""
    check_size(g, sigma)
    if len(tau.phases) != g.n_vertices:
        raise SizeMismatch(f"gauge has {len(tau.phases)} entries, graph has {g.n_vertices} vertices")
    if g.n_edges == 0:
        return MagneticPotential([])
    e = np.asarray(g.edges)
    return MagneticPotential(sigma.angles - tau.phases[e[:, 0]] + tau.phases[e[:, 1]])


def gauge_reduce(g: Graph, sigma: MagneticPotential, forest: SpanningForest | None = None):
    """Gauge sigma to be trivial on a BFS spanning forest.

    Returns ``(coords, tau)`` where ``gauge_transform(g, sigma, tau)`` vanishes
    on forest edges and equals ``coords.phis`` on the cotree edges.
    """
    check_size(g, sigma)
    forest = forest or spanning_forest(g)
    tau = np.zeros(g.n_vertices)
    for x in forest.order:
        p = forest.parent[x]
        if p != ROOT:
            tau[x] = tau[p] - sigma.oriented(g, p, x)
    gauge = GaugeFunction(tau)
    reduced = gauge_transform(g, sigma, gauge)
    return HolonomyCoordinates(forest, reduced.angles[list(forest.cotree)]), gauge


def expand(g: Graph, coords: HolonomyCoordinates) -> MagneticPotential:
    """Potential that is trivial on the forest and carries ``phis`` on the cotree."""
    angles = np.zeros(g.n_edges)
    angles[list(coords.forest.cotree)] = coords.phis
    return MagneticPotential(angles)


def coords_from_phis(g: Graph, phis: Sequence[float], forest: SpanningForest | None = None) -> HolonomyCoordinates:
    return HolonomyCoordinates(forest or spanning_forest(g), phis)


def holonomy(g: Graph, sigma: MagneticPotential, walk: Sequence[int]) -> float:
    """Sum of oriented angles along a closed walk, in [0, 2pi)."""
    check_size(g, sigma)
    walk = list(walk)
    if len(walk) < 2 or walk[0] != walk[-1]:
        raise NotAWalk("walk must be closed (first vertex == last vertex)")
    total = 0.0
    for a, b in zip(walk, walk[1:]):
        if not g.has_edge(a, b):
            raise NotAWalk(f"({a}, {b}) is not an edge")
        total += sigma.oriented(g, a, b)
    return float(wrap(total))


def tree_path(forest: SpanningForest, u: int, v: int) -> list[int]:
    """Vertices of the forest path from u to v (both in the same tree)."""
    up_u, up_v = [u], [v]
    while forest.parent[up_u[-1]] != ROOT:
        up_u.append(forest.parent[up_u[-1]])
    while forest.parent[up_v[-1]] != ROOT:
        up_v.append(forest.parent[up_v[-1]])
    if up_u[-1] != up_v[-1]:
        raise GraphError(f"{u} and {v} lie in different trees")
    while len(up_u) > 1 and len(up_v) > 1 and up_u[-2] == up_v[-2]:
        up_u.pop()
        up_v.pop()
    return up_u + up_v[-2::-1]


def fundamental_cycle(g: Graph, forest: SpanningForest, edge: int) -> list[int]:
    """Closed walk ``u -> v -> (tree path) -> u`` for canonical cotree edge ``(u, v)``."""
    u, v = g.edges[edge]
    return [u] + tree_path(forest, v, u)


def fundamental_holonomies(g: Graph, sigma: MagneticPotential, forest: SpanningForest | None = None) -> np.ndarray:
    forest = forest or spanning_forest(g)
    return np.array([holonomy(g, sigma, fundamental_cycle(g, forest, e)) for e in forest.cotree])


def is_sk_valued(sigma: MagneticPotential, k: int, tol: float = CLASSIFY_TOL) -> bool:
    step = TWO_PI / k
    ratio = sigma.angles / step
    return bool(np.all(angle_distance(np.round(ratio) * step, sigma.angles) <= tol))


def sk_exponents(sigma: MagneticPotential, k: int) -> np.ndarray:
    """Integer exponents l with sigma = xi_k^l on each canonical edge."""
    return np.mod(np.round(sigma.angles / (TWO_PI / k)).astype(int), k)


def is_balanced(g: Graph, sigma: MagneticPotential) -> bool:
    if not sigma.is_signature():
        raise NotASignature("potential takes values outside {+1, -1}")
    hol = fundamental_holonomies(g, sigma)
    return bool(np.all(angle_distance(hol, 0.0) <= 1e-9))


def potential_power(sigma: MagneticPotential, j: int) -> MagneticPotential:
    return MagneticPotential(sigma.angles * j)


def random_potential(g: Graph, rng: np.random.Generator) -> MagneticPotential:
    return MagneticPotential(rng.uniform(0.0, TWO_PI, g.n_edges))


def random_gauge(g: Graph, rng: np.random.Generator) -> GaugeFunction:
    return GaugeFunction(rng.uniform(0.0, TWO_PI, g.n_vertices))
