"""Seeded random graph corpora shared by the tests."""

from __future__ import annotations

import numpy as np

from magheight.graph import Graph


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    return Graph(n, [(j, int(rng.integers(0, j))) for j in range(1, n)])


def random_connected(n: int, b1: int, rng: np.random.Generator) -> Graph:
    """Random spanning tree plus ``b1`` extra edges (fewer if the graph fills up)."""
    t = random_tree(n, rng)
    edges = set(t.edges)
    missing = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    rng.shuffle(missing)
    edges.update(missing[:b1])
    return Graph(n, edges)


def corpus(count: int, n_range=(3, 10), b1_range=(1, 2), seed: int = 0) -> list[Graph]:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        b1 = int(rng.integers(b1_range[0], b1_range[1] + 1))
        if b1 > n * (n - 1) // 2 - (n - 1):
            continue
        out.append(random_connected(n, b1, rng))
    return out


def erdos_renyi_connected(count: int, n_max: int = 12, b1_max: int = 3, seed: int = 0) -> list[Graph]:
    """G(n, p) samples conditioned on being connected with b1 <= b1_max."""
    from magheight.graph import betti_number, is_connected

    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(3, n_max + 1))
        p = float(rng.uniform(1.5 / n, 3.5 / n))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        g = Graph(n, edges)
        if is_connected(g) and 1 <= betti_number(g) <= b1_max:
            out.append(g)
    return out
