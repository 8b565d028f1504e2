"""Graph operations and the potentials they induce. New vertices are appended last."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph import Graph, GraphError, disjoint_union
from .potential import TWO_PI, MagneticPotential, angle_distance, check_size, potential_power
from .spectra import eigenvalues, standard_laplacian

SK_TOL = 1e-9
LIFT_TOL = 1e-7


class ConstructionError(GraphError):
    pass


class EdgeExists(ConstructionError):
    pass


class SelfLoop(ConstructionError):
    pass


class NoSuchEdge(ConstructionError):
    pass


class NotNeighborSubset(ConstructionError):
    pass


class NotSkValued(ValueError):
    pass


def add_edge(g: Graph, u: int, v: int) -> Graph:
    if u == v:
        raise SelfLoop(f"self-loop at {u}")
    if not (0 <= u < g.n_vertices and 0 <= v < g.n_vertices):
        raise ConstructionError(f"vertex out of range: ({u}, {v})")
    if g.has_edge(u, v):
        raise EdgeExists(f"edge ({u}, {v}) already present")
    return Graph(g.n_vertices, list(g.edges) + [(u, v)])


def bridge_join(g: Graph, h: Graph, u_in_g: int, v_in_h: int) -> Graph:
    """Disjoint union with h shifted by |V(g)|, plus the bridge."""
    if not (0 <= u_in_g < g.n_vertices and 0 <= v_in_h < h.n_vertices):
        raise ConstructionError("bridge endpoint out of range")
    union = disjoint_union(g, h)
    return Graph(union.n_vertices, list(union.edges) + [(u_in_g, g.n_vertices + v_in_h)])


def split_vertex(g: Graph, x: int, part1: Iterable[int]) -> Graph:
    """x keeps the neighbours in part1; a new last vertex takes the rest."""
    part1 = set(part1)
    if not part1 <= g.neighbors(x):
        raise NotNeighborSubset(f"{sorted(part1 - g.neighbors(x))} are not neighbours of {x}")
    new = g.n_vertices
    edges = []
    for u, v in g.edges:
        if x in (u, v):
            y = v if u == x else u
            edges.append((x, y) if y in part1 else (new, y))
        else:
            edges.append((u, v))
    return Graph(new + 1, edges)


def subdivide_edge(g: Graph, e: tuple[int, int]) -> Graph:
    u, v = e
    if not (0 <= u < g.n_vertices and 0 <= v < g.n_vertices) or not g.has_edge(u, v):
        raise NoSuchEdge(f"no edge ({u}, {v})")
    w = g.n_vertices
    edges = [f for f in g.edges if set(f) != {u, v}] + [(u, w), (w, v)]
    return Graph(w + 1, edges)


def cartesian_product(g: Graph, sg: MagneticPotential, h: Graph, sh: MagneticPotential):
    """Vertex (x, z) is x * |V(h)| + z. Edges of the g-factor carry sg, edges of the h-factor carry sh."""
    check_size(g, sg)
    check_size(h, sh)
    nh = h.n_vertices
    values = {}
    for i, (x, y) in enumerate(g.edges):
        for z in range(nh):
            values[(x * nh + z, y * nh + z)] = sg.angles[i]
    for i, (z, w) in enumerate(h.edges):
        for x in range(g.n_vertices):
            values[(x * nh + z, x * nh + w)] = sh.angles[i]
    prod = Graph(g.n_vertices * nh, values.keys())
    # (x,z) < (y,z) and (x,z) < (x,w) already, so keys are canonical
    angles = np.array([values[e] for e in prod.edges])
    return prod, MagneticPotential(angles)


def suspension(g: Graph) -> Graph:
    apex = g.n_vertices
    return Graph(apex + 1, list(g.edges) + [(x, apex) for x in range(apex)])


@dataclass(frozen=True)
class LiftedGraph:
    base: Graph
    k: int
    lift: Graph
    sigma_base: MagneticPotential

    def fiber(self, x: int) -> list[int]:
        return [x * self.k + j for j in range(self.k)]

    def project(self, v: int) -> int:
        return v // self.k


def sk_exponents_checked(sigma: MagneticPotential, k: int, tol: float = SK_TOL) -> np.ndarray:
    step = TWO_PI / k
    exps = np.round(sigma.angles / step)
    if len(exps) and np.max(angle_distance(exps * step, sigma.angles)) > tol:
        raise NotSkValued(f"potential is not S_{k}-valued within {tol}")
    return np.mod(exps.astype(int), k)


def cyclic_lift(g: Graph, sigma: MagneticPotential, k: int) -> LiftedGraph:
    """sigma(x, y) = xi_k^l joins (x, j) to (y, j + l mod k); vertex (x, j) is x * k + j."""
    if k < 1:
        raise ValueError("k must be positive")
    check_size(g, sigma)
    exps = sk_exponents_checked(sigma, k)
    edges = [(x * k + j, y * k + (j + int(l)) % k) for (x, y), l in zip(g.edges, exps) for j in range(k)]
    return LiftedGraph(g, k, Graph(g.n_vertices * k, edges), sigma)


def lift_spectrum_check(lg: LiftedGraph, tol: float = LIFT_TOL) -> bool:
    lifted = np.linalg.eigvalsh(standard_laplacian(lg.lift))
    parts = np.concatenate([eigenvalues(lg.base, potential_power(lg.sigma_base, j)) for j in range(lg.k)])
    if len(lifted) != len(parts):
        return False
    return bool(np.max(np.abs(np.sort(lifted) - np.sort(parts)), initial=0.0) <= tol)


def sk_potential(g: Graph, exponents, k: int) -> MagneticPotential:
    return MagneticPotential(np.asarray(exponents, dtype=float) * (TWO_PI / k))


def random_sk_potential(g: Graph, k: int, rng: np.random.Generator) -> MagneticPotential:
    return sk_potential(g, rng.integers(0, k, g.n_edges), k)


def hamiltonian_lower_bound(n: int) -> float:
    """nu(C_n), a lower bound for any graph with a Hamiltonian cycle on n vertices."""
    return 2 - 2 * math.cos(math.pi / n)
