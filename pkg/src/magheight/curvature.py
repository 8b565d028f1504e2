"""Bakry-Emery forms Gamma, Gamma_2 of the magnetic Laplacian and the CD(K, n) test.

Conventions, with Delta the (positive) magnetic Laplacian:

    2 Gamma(f, g)(x)   = sum_{y~x} (f(x) - s(x,y) f(y)) * conj(g(x) - s(x,y) g(y))
    2 Gamma_2(f, g)(x) = -Delta Gamma(f, g)(x) + Gamma(f, Delta g)(x) + Gamma(Delta f, g)(x)

where Delta acts on the scalar function Gamma(f, g) without a potential.
Each form is stored as the Hermitian matrix H with form(f, g) = g^H H f,
restricted to the coordinates of the 2-ball around x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, bfs_distances
from .potential import MagneticPotential, check_size
from .spectra import magnetic_laplacian

PSD_TOL = 1e-9
BISECT_WIDTH = 1e-8


@dataclass(frozen=True, eq=False)
class LocalForms:
    center: int
    ball_vertices: tuple[int, ...]
    gamma: np.ndarray  # matrix of 2 Gamma(., .)(x)
    gamma2: np.ndarray  # matrix of 2 Gamma_2(., .)(x)
    delta_row: np.ndarray  # f -> (Delta f)(x) on ball coordinates


def ball(g: Graph, x: int, radius: int = 2) -> list[int]:
    dist = bfs_distances(g, x)
    return [v for v in range(g.n_vertices) if dist[v] <= radius]


def _gamma_matrix(L: np.ndarray, g: Graph, x: int) -> np.ndarray:
    """M_x = sum_y r_y^H r_y with r_y = e_x - s(x,y) e_y, i.e. r_y = -L[x, y] on y."""
    n = g.n_vertices
    M = np.zeros((n, n), dtype=complex)
    for y in g.neighbors(x):
        r = np.zeros(n, dtype=complex)
        r[x] = 1.0
        r[y] = L[x, y]  # L[x, y] = -s(x, y)
        M += np.outer(r.conj(), r)
    return M


def local_forms(g: Graph, sigma: MagneticPotential, x: int) -> LocalForms:
    if not 0 <= x < g.n_vertices:
        raise IndexError(f"vertex {x} out of range")
    check_size(g, sigma)
    verts = ball(g, x)
    # only the 3-ball influences Gamma_2(x); work on it to keep matrices small
    outer = ball(g, x, 3)
    sub, labels = g.induced(outer)
    pos = {v: i for i, v in enumerate(labels)}
    sub_sigma = MagneticPotential([sigma.angles[g.edge_index(labels[u], labels[v])] for u, v in sub.edges])
    L = magnetic_laplacian(sub, sub_sigma)
    cx = pos[x]
    Mx = _gamma_matrix(L, sub, cx)
    four_g2 = L @ Mx + Mx @ L
    for y in sub.neighbors(cx):
        four_g2 -= Mx - _gamma_matrix(L, sub, y)
    idx = [pos[v] for v in verts]
    gamma = Mx[np.ix_(idx, idx)]
    gamma2 = 0.5 * four_g2[np.ix_(idx, idx)]
    gamma2 = 0.5 * (gamma2 + gamma2.conj().T)
    return LocalForms(x, tuple(verts), gamma, gamma2, L[cx, idx].copy())


def _cd_form(forms: LocalForms, K: float, n: float) -> np.ndarray:
    # Gamma_2 - K Gamma - |Delta f(x)|^2 / n, scaled by 2
    form = forms.gamma2 - K * forms.gamma
    if not math.isinf(n):
        form = form - (2.0 / n) * np.outer(forms.delta_row.conj(), forms.delta_row)
    return form


def cd_check(g: Graph, sigma: MagneticPotential, x: int, K: float, n: float = math.inf,
             forms: LocalForms | None = None) -> bool:
    if not (n > 0):
        raise ValueError("dimension n must be positive or infinite")
    forms = forms or local_forms(g, sigma, x)
    return bool(np.linalg.eigvalsh(_cd_form(forms, K, n))[0] >= -PSD_TOL)


def cd_check_global(g: Graph, sigma: MagneticPotential, K: float, n: float = math.inf) -> bool:
    return all(cd_check(g, sigma, x, K, n) for x in range(g.n_vertices))


def curvature_sup(g: Graph, sigma: MagneticPotential, x: int, n: float = math.inf,
                  width: float = BISECT_WIDTH) -> float:
    """Largest K (to ``width``) with CD(K, n) at x; inf for an isolated vertex."""
    forms = local_forms(g, sigma, x)
    if not np.any(forms.gamma):
        return math.inf
    lo, hi = -1.0, 1.0
    while not cd_check(g, sigma, x, lo, n, forms):
        lo *= 2
        if lo < -1e12:
            return -math.inf
    while cd_check(g, sigma, x, hi, n, forms):
        hi *= 2
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if cd_check(g, sigma, x, mid, n, forms):
            lo = mid
        else:
            hi = mid
    return lo


def curvature_report(g: Graph, sigma: MagneticPotential, K: float, n: float = math.inf) -> list[dict]:
    out = []
    for x in range(g.n_vertices):
        out.append({"vertex": x, "cd": cd_check(g, sigma, x, K, n), "curvature_sup": curvature_sup(g, sigma, x, n)})
    return out
