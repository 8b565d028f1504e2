"""Upper and lower bounds on nu(G) and the bracketing report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .graph import (
    INF,
    DisconnectedGraph,
    Graph,
    betti_number,
    connected_components,
    diameter,
    girth,
    is_bipartite,
    is_complete,
    is_connected,
    is_forest,
    is_regular,
    is_triangle_free,
    max_degree,
    shortest_cycle,
)

SLACK = 1e-7
UPPER_NAMES = ("forest_iso", "edge_degree", "avg_degree", "betti", "dmax", "subgraph_a", "subgraph_b",
               "subgraph_c", "alon_boppana", "ramanujan_upper")
LOWER_NAMES = ("ramanujan_lower", "diam_vol", "curvature_diam")
CURVATURE_CONSTANT = 1.0 / 8.0


class BoundError(ValueError):
    pass


class NotAForest(BoundError):
    pass


class NoEdges(BoundError):
    pass


class EmptySubgraph(BoundError):
    pass


class GirthTooSmall(BoundError):
    pass


class NotRegular(BoundError):
    pass


class BoundViolation(AssertionError):
    def __init__(self, report: "BoundReport", violations: list[str]):
        super().__init__("; ".join(violations))
        self.report = report
        self.violations = violations


# individual bounds -------------------------------------------------------


def boundary_size(g: Graph, vertices: Iterable[int]) -> int:
    inside = set(vertices)
    return sum((u in inside) != (v in inside) for u, v in g.edges)


def forest_isoperimetric_bound(g: Graph, forest_vertices: Iterable[int]) -> float:
    """|dT| / |T| for a vertex set T inducing a forest."""
    verts = sorted(set(forest_vertices))
    if not verts:
        raise EmptySubgraph("empty vertex set")
    sub, _ = g.induced(verts)
    if not is_forest(sub):
        raise NotAForest("vertex set does not induce a forest")
    return boundary_size(g, verts) / len(verts)


def greedy_forest_bound(g: Graph) -> tuple[float, list[int]]:
    """Best |dT|/|T| over greedily grown induced trees (heuristic, not h_forest)."""
    best, best_set = INF, []
    for root in range(g.n_vertices):
        tree = [root]
        inside = {root}
        boundary = g.degree(root)
        if boundary / 1 < best:
            best, best_set = boundary / 1, [root]
        frontier = sorted(g.neighbors(root))
        while frontier:
            # pick the candidate keeping the tree induced and adding least boundary
            cands = [y for y in frontier if len(g.neighbors(y) & inside) == 1]
            if not cands:
                break
            y = min(cands, key=lambda v: (g.degree(v), v))
            inside.add(y)
            tree.append(y)
            boundary += g.degree(y) - 2
            ratio = boundary / len(tree)
            if ratio < best:
                best, best_set = ratio, list(tree)
            frontier = sorted({z for v in tree for z in g.neighbors(v)} - inside)
    return best, sorted(best_set)


def edge_degree_bound(g: Graph) -> float:
    if g.n_edges == 0:
        raise NoEdges("graph has no edges")
    return min((g.degree(x) + g.degree(y)) / 2 - 1 for x, y in g.edges)


def combinatorial_bounds(g: Graph) -> tuple[float, float, float]:
    """(average degree, 4 b1 / |V|, d_max - 1)."""
    n = g.n_vertices
    if n == 0:
        return 0.0, 0.0, 0.0
    return 2 * g.n_edges / n, 4 * betti_number(g) / n, float(max_degree(g) - 1)


def out_degrees(g: Graph, vertices: Iterable[int]) -> dict[int, int]:
    inside = set(vertices)
    return {x: len(g.neighbors(x) - inside) for x in inside}


@dataclass
class SubgraphBounds:
    a: float
    b: float | None
    c: float | None

    @property
    def best(self) -> float:
        return min(v for v in (self.a, self.b, self.c) if v is not None)


def subgraph_bounds(g: Graph, g0_vertices: Iterable[int], nu_g0: float | None = None,
                    modulus_constant_eigfn: bool = False) -> SubgraphBounds:
    """All three right-hand sides for the induced subgraph on ``g0_vertices``."""
    verts = sorted(set(g0_vertices))
    if not verts:
        raise EmptySubgraph("G0 must be nonempty")
    sub, _ = g.induced(verts)
    outs = out_degrees(g, verts)
    n0 = len(verts)
    a = 4 * betti_number(sub) / n0 + sum(outs.values()) / n0
    b = c = None
    if nu_g0 is not None:
        b = nu_g0 + max(outs.values())
        if modulus_constant_eigfn:
            c = nu_g0 + sum(outs.values()) / n0
    return SubgraphBounds(a, b, c)


def subgraph_bound(g: Graph, g0_vertices: Iterable[int], nu_g0: float | None = None,
                   modulus_constant_eigfn: bool = False) -> float:
    return subgraph_bounds(g, g0_vertices, nu_g0, modulus_constant_eigfn).best


def exact_nu_with_flat_eigenfunction(h: Graph) -> float | None:
    """nu for connected cycles, trees and complete graphs, which all admit a
    constant-modulus lambda_1 eigenfunction of a maximal potential; None otherwise."""
    n = h.n_vertices
    if n == 0 or not is_connected(h):
        return None
    if is_forest(h):
        return 0.0
    if is_complete(h):
        return float(n - 2)
    if h.n_edges == n and all(h.degree(x) == 2 for x in range(n)):
        return 2 - 2 * math.cos(math.pi / n)
    return None


def subgraph_candidates(g: Graph) -> list[list[int]]:
    """Vertex sets whose induced subgraph has a known nu: a shortest cycle and
    every vertex-deleted subgraph that is a cycle, tree or complete graph."""
    cands = []
    cyc = shortest_cycle(g)
    if cyc is not None:
        cands.append(sorted(cyc))
    for v in range(g.n_vertices):
        rest = [x for x in range(g.n_vertices) if x != v]
        if rest and exact_nu_with_flat_eigenfunction(g.induced(rest)[0]) is not None:
            cands.append(rest)
    return cands


def alon_boppana_bound(g: Graph, k: int | None = None) -> float:
    """d - 2 sqrt(d-1) + (2 sqrt(d-1) - 1) / k with d = d_max, for girth >= 2k+1."""
    if not is_connected(g):
        raise DisconnectedGraph("Alon-Boppana bound needs a connected graph")
    d = max_degree(g)
    if d < 2:
        raise BoundError("needs d_max >= 2")
    gi = girth(g)
    root = math.sqrt(d - 1)
    if k is None:
        if gi == INF:
            return d - 2 * root
        k = int((gi - 1) // 2)
    if k < 1 or gi < 2 * k + 1:
        raise GirthTooSmall(f"girth {gi} < 2k+1 = {2 * k + 1}")
    return d - 2 * root + (2 * root - 1) / k


def ramanujan_sandwich(g: Graph) -> tuple[float, float]:
    if g.n_vertices == 0 or not is_regular(g):
        raise NotRegular("graph is not regular")
    d = g.degree(0)
    if d < 3:
        raise NotRegular(f"degree {d} < 3")
    return d - 2 * math.sqrt(d - 1), float(d - 1)


def diameter_volume_lower(g: Graph) -> float:
    if not is_connected(g):
        raise DisconnectedGraph("diameter-volume bound needs a connected graph")
    return 1.0 / ((diameter(g) + 1) * g.n_vertices)


def curvature_diameter_lower(g: Graph) -> tuple[float | None, str]:
    """(value, reason). Value is C / (diam + 1)^2 with C = 1/8, or None when
    the hypotheses fail; reason names the failed hypothesis."""
    from .curvature import cd_check_global
    from .potential import trivial

    if g.n_vertices == 0 or not is_connected(g):
        return None, "disconnected"
    if is_bipartite(g):
        return None, "bipartite"
    if not is_triangle_free(g):
        return None, "has triangles"
    if not cd_check_global(g, trivial(g), 0.0, math.inf):
        return None, "fails CD(0, inf)"
    return CURVATURE_CONSTANT / (diameter(g) + 1) ** 2, ""


def certified_upper_bound(g: Graph) -> float:
    """Cheapest proven upper bound on nu(G); used by the solver to stop early."""
    comps = connected_components(g)
    if len(comps) > 1:
        return min(certified_upper_bound(g.induced(c)[0]) for c in comps)
    if is_forest(g):
        return 0.0
    vals = list(combinatorial_bounds(g)) + [edge_degree_bound(g)]
    for verts in subgraph_candidates(g):
        nu0 = exact_nu_with_flat_eigenfunction(g.induced(verts)[0])
        vals.append(subgraph_bounds(g, verts, nu0, True).best)
    return min(vals)


# report -----------------------------------------------------------------


@dataclass
class BoundRecord:
    name: str
    kind: str
    value: float | None
    applicable: bool
    reason: str = ""

    def to_json(self) -> dict:
        v = self.value
        if v is not None and math.isinf(v):
            v = "inf"
        return {"name": self.name, "kind": self.kind, "value": v, "applicable": self.applicable,
                "reason": self.reason}


@dataclass
class BoundReport:
    records: list[BoundRecord]
    nu_estimate: float
    lower_max: float
    upper_min: float
    violations: list[str] = field(default_factory=list)

    def __getitem__(self, name: str) -> BoundRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "bounds": [r.to_json() for r in self.records],
            "nu_estimate": self.nu_estimate,
            "lower_max": self.lower_max,
            "upper_min": self.upper_min,
        }


def _component_records(g: Graph) -> list[BoundRecord]:
    """Bounds for a connected graph."""
    recs = []

    def add(name, kind, fn):
        try:
            value = fn()
        except BoundError as exc:
            recs.append(BoundRecord(name, kind, None, False, str(exc)))
        else:
            if value is None:
                recs.append(BoundRecord(name, kind, None, False, "not applicable"))
            else:
                recs.append(BoundRecord(name, kind, float(value), True))

    forest = is_forest(g)
    add("forest_iso", "upper", lambda: greedy_forest_bound(g)[0] if g.n_vertices else 0.0)
    add("edge_degree", "upper", lambda: edge_degree_bound(g))
    avg, betti, dmax = combinatorial_bounds(g)
    add("avg_degree", "upper", lambda: avg)
    add("betti", "upper", lambda: betti)
    add("dmax", "upper", lambda: dmax)

    cands = subgraph_candidates(g)
    sub = [subgraph_bounds(g, v, exact_nu_with_flat_eigenfunction(g.induced(v)[0]), True) for v in cands]
    add("subgraph_a", "upper", lambda: min((s.a for s in sub), default=None))
    add("subgraph_b", "upper", lambda: min((s.b for s in sub if s.b is not None), default=None))
    add("subgraph_c", "upper", lambda: min((s.c for s in sub if s.c is not None), default=None))
    add("alon_boppana", "upper", lambda: alon_boppana_bound(g))

    regular = g.n_vertices > 0 and is_regular(g) and g.degree(0) >= 3
    add("ramanujan_upper", "upper", lambda: ramanujan_sandwich(g)[1] if regular else None)
    add("ramanujan_lower", "lower", lambda: ramanujan_sandwich(g)[0] if regular else None)

    if forest:
        recs.append(BoundRecord("diam_vol", "lower", None, False, "forest: no unbalanced signature"))
    else:
        add("diam_vol", "lower", lambda: diameter_volume_lower(g))
    value, reason = curvature_diameter_lower(g)
    recs.append(BoundRecord("curvature_diam", "lower", value, value is not None, reason))
    return recs


def bound_records(g: Graph) -> list[BoundRecord]:
    """All bounds; disconnected graphs combine per-component values with min."""
    comps = connected_components(g)
    if len(comps) <= 1:
        return _component_records(g)
    per = [_component_records(g.induced(c)[0]) for c in comps]
    out = []
    for i, rec in enumerate(per[0]):
        group = [p[i] for p in per]
        if rec.kind == "upper":
            vals = [r.value for r in group if r.applicable]
            out.append(BoundRecord(rec.name, "upper", min(vals) if vals else None, bool(vals),
                                   "" if vals else "no component applicable"))
        else:
            ok = all(r.applicable for r in group)
            out.append(BoundRecord(rec.name, "lower", min(r.value for r in group) if ok else None, ok,
                                   "" if ok else "not applicable on every component"))
    return out


def bound_report(g: Graph, est, *, raise_on_violation: bool = True,
                 extra_lower: dict[str, float] | None = None) -> BoundReport:
    """Bracket the estimate; a violation beyond 1e-7 raises :class:`BoundViolation`."""
    value = est if isinstance(est, (int, float)) else est.value
    records = bound_records(g)
    for name, v in (extra_lower or {}).items():
        records.append(BoundRecord(name, "lower", float(v), True))
    uppers = [r.value for r in records if r.kind == "upper" and r.applicable]
    lowers = [r.value for r in records if r.kind == "lower" and r.applicable]
    report = BoundReport(records, float(value), max(lowers, default=0.0), min(uppers, default=INF))
    for r in records:
        if not r.applicable:
            continue
        if r.kind == "upper" and value > r.value + SLACK:
            report.violations.append(f"{r.name}: estimate {value:.12g} > upper {r.value:.12g}")
        if r.kind == "lower" and value < r.value - SLACK:
            report.violations.append(f"{r.name}: estimate {value:.12g} < lower {r.value:.12g}")
    if report.violations and raise_on_violation:
        raise BoundViolation(report, report.violations)
    return report
