"""Immutable simple graphs and the combinatorial quantities used everywhere else."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

INF = math.inf
ROOT = -1


class GraphError(ValueError):
    pass


class ParseError(GraphError):
    pass


class DisconnectedGraph(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n_vertices-1``.

    Edges are stored once, as ``(u, v)`` with ``u < v``, sorted
    lexicographically. That orientation is the one magnetic potentials
    refer to.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    _adj: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __init__(self, n_vertices: int, edges: Iterable[Sequence[int]] = ()):
        n = int(n_vertices)
        if n < 0:
            raise GraphError("negative vertex count")
        canon = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in canon:
                raise GraphError(f"duplicate edge {key}")
            canon.add(key)
        ordered = tuple(sorted(canon))
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in ordered:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "n_vertices", n)
        object.__setattr__(self, "edges", ordered)
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(ordered)})

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, x: int) -> frozenset[int]:
        return self._adj[x]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edge_index(self, u: int, v: int) -> int:
        """Index of edge {u, v} in the canonical list (orientation ignored)."""
        key = (u, v) if u < v else (v, u)
        try:
            return self._index[key]
        except KeyError:
            raise GraphError(f"no edge {key}") from None

    def degree(self, x: int) -> int:
        return len(self._adj[x])

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled in increasing order; returns (subgraph, old labels)."""
        labels = sorted(set(vertices))
        new = {v: i for i, v in enumerate(labels)}
        sub = [(new[u], new[v]) for u, v in self.edges if u in new and v in new]
        return Graph(len(labels), sub), labels

    # serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.n_vertices, "edges": [list(e) for e in self.edges]}

    def to_edgelist(self) -> str:
        lines = [f"{self.n_vertices} {self.n_edges}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def from_json(data: dict | str) -> Graph:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from exc
    try:
        return Graph(data["n"], data["edges"])
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed graph JSON: {exc}") from exc
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def from_edgelist(text: str) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v``. Lines starting with ``#`` are ignored."""
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise ParseError("empty edge list")
    try:
        n, m = (int(t) for t in rows[0])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise ParseError(f"bad edge-list line: {exc}") from exc
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    try:
        return Graph(n, edges)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def load_graph(path) -> Graph:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return from_json(text)
    return from_edgelist(text)


# combinatorics ---------------------------------------------------------


@dataclass(frozen=True)
class SpanningForest:
    parent: tuple[int, ...]
    tree_edges: frozenset[int]
    cotree: tuple[int, ...]
    order: tuple[int, ...]  # BFS visiting order, roots first in their component

    @property
    def roots(self) -> list[int]:
        return [v for v, p in enumerate(self.parent) if p == ROOT]


def spanning_forest(g: Graph) -> SpanningForest:
    """BFS forest rooted at the smallest vertex of each component."""
    n = g.n_vertices
    parent = [None] * n
    tree = set()
    order = []
    for root in range(n):
        if parent[root] is not None:
            continue
        parent[root] = ROOT
        queue = deque([root])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in sorted(g.neighbors(x)):
                if parent[y] is None:
                    parent[y] = x
                    tree.add(g.edge_index(x, y))
                    queue.append(y)
    cotree = tuple(i for i in range(g.n_edges) if i not in tree)
    return SpanningForest(tuple(parent), frozenset(tree), cotree, tuple(order))


def connected_components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n_vertices
    comps = []
    for s in range(g.n_vertices):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in g.neighbors(x):
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def betti_number(g: Graph) -> int:
    return g.n_edges - g.n_vertices + len(connected_components(g))


def is_forest(g: Graph) -> bool:
    return betti_number(g) == 0


def bfs_distances(g: Graph, source: int) -> list[float]:
    dist = [INF] * g.n_vertices
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if dist[y] == INF:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def diameter(g: Graph) -> int:
    if g.n_vertices == 0:
        return 0
    best = 0
    for s in range(g.n_vertices):
        d = bfs_distances(g, s)
        m = max(d)
        if m == INF:
            raise DisconnectedGraph("diameter of a disconnected graph")
        best = max(best, m)
    return int(best)


def shortest_cycle(g: Graph) -> list[int] | None:
    """Vertices of a shortest cycle in walk order, or None for forests."""
    best = None
    for u, v in g.edges:
        # shortest u-v path avoiding the edge itself closes a shortest cycle through it
        parent = {u: None}
        queue = deque([u])
        while queue and v not in parent:
            x = queue.popleft()
            for y in sorted(g.neighbors(x)):
                if y in parent or (x == u and y == v):
                    continue
                parent[y] = x
                queue.append(y)
        if v not in parent:
            continue
        cyc = [v]
        while parent[cyc[-1]] is not None:
            cyc.append(parent[cyc[-1]])
        if best is None or len(cyc) < len(best):
            best = cyc[::-1]
    return best


def girth(g: Graph) -> float:
    cyc = shortest_cycle(g)
    return INF if cyc is None else len(cyc)


def degrees(g: Graph) -> list[int]:
    return [g.degree(x) for x in range(g.n_vertices)]


def max_degree(g: Graph) -> int:
    return max(degrees(g), default=0)


def min_degree(g: Graph) -> int:
    return min(degrees(g), default=0)


def is_regular(g: Graph) -> bool:
    return len(set(degrees(g))) <= 1


def is_bipartite(g: Graph) -> bool:
    color = [None] * g.n_vertices
    for s in range(g.n_vertices):
        if color[s] is not None:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if color[y] is None:
                    color[y] = 1 - color[x]
                    queue.append(y)
                elif color[y] == color[x]:
                    return False
    return True


def is_triangle_free(g: Graph) -> bool:
    return not any(g.neighbors(u) & g.neighbors(v) for u, v in g.edges)


def is_complete(g: Graph) -> bool:
    n = g.n_vertices
    return g.n_edges == n * (n - 1) // 2


def summary(g: Graph) -> dict:
    connected = is_connected(g)
    gi = girth(g)
    return {
        "n": g.n_vertices,
        "m": g.n_edges,
        "b1": betti_number(g),
        "components": len(connected_components(g)),
        "girth": None if gi == INF else int(gi),
        "diameter": diameter(g) if connected else None,
        "regular": is_regular(g),
        "bipartite": is_bipartite(g),
        "triangle_free": is_triangle_free(g),
        "d_max": max_degree(g),
        "d_min": min_degree(g),
    }


# standard families -----------------------------------------------------


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycles need at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, j) for j in range(1, leaves + 1)])


def wheel(d: int) -> Graph:
    """Rim ``0..d-1`` in cyclic order, hub ``d``."""
    rim = [(i, (i + 1) % d) for i in range(d)]
    return Graph(d + 1, rim + [(i, d) for i in range(d)])


def hypercube(dim: int) -> Graph:
    n = 1 << dim
    return Graph(n, [(v, v ^ (1 << b)) for v in range(n) for b in range(dim) if v < v ^ (1 << b)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    edges, offset = [], 0
    for h in graphs:
        edges += [(u + offset, v + offset) for u, v in h.edges]
        offset += h.n_vertices
    return Graph(offset, edges)
