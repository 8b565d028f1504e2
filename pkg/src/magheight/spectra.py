"""Magnetic Laplacians and their spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, SpanningForest, spanning_forest
from .potential import HolonomyCoordinates, MagneticPotential, check_size, expand, potential_power

HERMITIAN_TOL = 1e-12
DEGENERACY_TOL = 1e-8
# stacked eigensolves are chunked to keep each batch around this many bytes
_BATCH_BYTES = 1 << 25


class NotHermitian(ValueError):
    pass


class ZeroVector(ValueError):
    pass


class NotDifferentiable(ArithmeticError):
    """lambda_1 is (numerically) degenerate, so it has no gradient."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def to_json(self, tol: float = DEGENERACY_TOL) -> dict:
        return {"eigenvalues": [float(v) for v in self.eigenvalues], "multiplicity_tol": tol}


def magnetic_laplacian(g: Graph, sigma: MagneticPotential | None = None) -> np.ndarray:
    """Dense matrix of (Delta^sigma f)(x) = sum_{y~x} f(x) - sigma(x,y) f(y)."""
    n = g.n_vertices
    A = np.zeros((n, n), dtype=complex)
    if n == 0:
        return A
    A[np.diag_indices(n)] = [g.degree(x) for x in range(n)]
    if g.n_edges == 0:
        return A
    if sigma is None:
        phases = np.ones(g.n_edges, dtype=complex)
    else:
        check_size(g, sigma)
        phases = sigma.phases
    e = np.asarray(g.edges)
    A[e[:, 0], e[:, 1]] = -phases
    A[e[:, 1], e[:, 0]] = -np.conj(phases)
    return A


def standard_laplacian(g: Graph) -> np.ndarray:
    return magnetic_laplacian(g).real


def check_hermitian(A: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)))
    if np.max(np.abs(A - A.conj().T), initial=0.0) > tol * scale:
        raise NotHermitian("matrix differs from its conjugate transpose")


def jacobi_eigh(A: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Each step annihilates one off-diagonal pair with a complex Givens
    rotation. Returns ascending eigenvalues and unitary eigenvectors.
    """
    A = np.array(A, dtype=complex)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(A), 1e-300)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.linalg.norm(A) ** 2 - np.sum(np.abs(np.diag(A)) ** 2), 0.0))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = A[p, q]
                r = abs(b)
                if r <= 1e-300:
                    continue
                phase = b / r
                a, d = A[p, p].real, A[q, q].real
                t = 0.5 * math.atan2(2.0 * r, a - d)
                c, s = math.cos(t), math.sin(t)
                # G = diag(1, conj(phase)) @ [[c, -s], [s, c]]
                g_pp, g_pq = c, -s
                g_qp, g_qq = s * np.conj(phase), c * np.conj(phase)
                col_p, col_q = A[:, p].copy(), A[:, q].copy()
                A[:, p] = col_p * g_pp + col_q * g_qp
                A[:, q] = col_p * g_pq + col_q * g_qq
                row_p, row_q = A[p, :].copy(), A[q, :].copy()
                A[p, :] = np.conj(g_pp) * row_p + np.conj(g_qp) * row_q
                A[q, :] = np.conj(g_pq) * row_p + np.conj(g_qq) * row_q
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = vp * g_pp + vq * g_qp
                V[:, q] = vp * g_pq + vq * g_qq
    w = np.diag(A).real
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def spectrum(A: np.ndarray, method: str = "lapack") -> Spectrum:
    """Full eigendecomposition; ``method`` is ``"lapack"`` or ``"jacobi"``."""
    check_hermitian(A)
    if method == "lapack":
        w, V = np.linalg.eigh(A)
    elif method == "jacobi":
        w, V = jacobi_eigh(A)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    w = np.asarray(w, dtype=float)
    w.setflags(write=False)
    V.setflags(write=False)
    return Spectrum(w, V)


def eigenvalues(g: Graph, sigma: MagneticPotential | None = None) -> np.ndarray:
    return np.linalg.eigvalsh(magnetic_laplacian(g, sigma))


def lambda1(g: Graph, sigma: MagneticPotential | None = None) -> float:
    """Smallest eigenvalue of Delta^sigma, clamped at 0."""
    if g.n_vertices == 0:
        return 0.0
    return max(0.0, float(eigenvalues(g, sigma)[0]))


def rayleigh_quotient(g: Graph, sigma: MagneticPotential, f) -> float:
    f = np.asarray(f, dtype=complex)
    denom = float(np.vdot(f, f).real)
    if denom == 0.0:
        raise ZeroVector("Rayleigh quotient of the zero function")
    check_size(g, sigma)
    if g.n_edges == 0:
        return 0.0
    e = np.asarray(g.edges)
    diff = f[e[:, 0]] - sigma.phases * f[e[:, 1]]
    return float(np.sum(np.abs(diff) ** 2) / denom)


def multiplicity(s: Spectrum | np.ndarray, value: float, tol: float = DEGENERACY_TOL) -> int:
    if tol <= 0:
        raise ValueError("tol must be positive")
    w = s.eigenvalues if isinstance(s, Spectrum) else np.asarray(s)
    return int(np.sum(np.abs(w - value) <= tol))


def lambda1_gradient(g: Graph, coords: HolonomyCoordinates) -> np.ndarray:
    """Hellmann-Feynman gradient of lambda_1 with respect to the cotree angles."""
    cot = list(coords.forest.cotree)
    if not cot:
        return np.zeros(0)
    sigma = expand(g, coords)
    w, V = np.linalg.eigh(magnetic_laplacian(g, sigma))
    if w[1] - w[0] <= DEGENERACY_TOL:
        raise NotDifferentiable(f"lambda_1 gap {w[1] - w[0]:.3g} below {DEGENERACY_TOL}")
    return edge_derivatives(g, cot, sigma.angles[cot], V[:, 0])


def edge_derivatives(g: Graph, edge_ids, angles, f) -> np.ndarray:
    """d/dtheta_e of f^H Delta^sigma f for the given canonical edges."""
    e = np.asarray([g.edges[i] for i in edge_ids]).reshape(-1, 2)
    return 2.0 * np.imag(np.exp(1j * np.asarray(angles)) * np.conj(f[e[:, 0]]) * f[e[:, 1]])


class HolonomyLaplacian:
    """Fast repeated assembly of Delta^sigma for holonomy coordinates on a fixed forest."""

    def __init__(self, g: Graph, forest: SpanningForest | None = None):
        self.graph = g
        self.forest = forest or spanning_forest(g)
        self.base = magnetic_laplacian(g)
        cot = np.asarray(self.forest.cotree, dtype=int)
        self.cotree = cot
        e = np.asarray(g.edges, dtype=int).reshape(-1, 2)
        self.rows = e[cot, 0] if len(cot) else np.zeros(0, dtype=int)
        self.cols = e[cot, 1] if len(cot) else np.zeros(0, dtype=int)

    @property
    def dim(self) -> int:
        return len(self.cotree)

    def matrix(self, phis) -> np.ndarray:
        A = self.base.copy()
        z = np.exp(1j * np.asarray(phis, dtype=float))
        A[self.rows, self.cols] = -z
        A[self.cols, self.rows] = -np.conj(z)
        return A

    def eigh(self, phis):
        return np.linalg.eigh(self.matrix(phis))

    def lambda1(self, phis) -> float:
        return max(0.0, float(np.linalg.eigvalsh(self.matrix(phis))[0]))

    def gradient_from_vector(self, phis, f) -> np.ndarray:
        return 2.0 * np.imag(np.exp(1j * np.asarray(phis)) * np.conj(f[self.rows]) * f[self.cols])

    def lambda1_batch(self, phi_rows) -> np.ndarray:
        """lambda_1 for each row of a (B, b1) array of holonomy angles."""
        phi_rows = np.asarray(phi_rows, dtype=float).reshape(-1, self.dim)
        n = self.graph.n_vertices
        out = np.empty(len(phi_rows))
        if n == 0:
            out[:] = 0.0
            return out
        chunk = max(1, _BATCH_BYTES // (16 * n * n))
        for start in range(0, len(phi_rows), chunk):
            block = phi_rows[start:start + chunk]
            mats = np.broadcast_to(self.base, (len(block), n, n)).copy()
            z = np.exp(1j * block)
            mats[:, self.rows, self.cols] = -z
            mats[:, self.cols, self.rows] = -np.conj(z)
            out[start:start + len(block)] = np.linalg.eigvalsh(mats)[:, 0]
        return np.maximum(out, 0.0)


def power_spectra(g: Graph, sigma: MagneticPotential, k: int) -> list[np.ndarray]:
    """Spectra of Delta^{sigma^j} for j = 0..k-1."""
    return [eigenvalues(g, potential_power(sigma, j)) for j in range(k)]


def eigencurves(g: Graph, phi_rows) -> np.ndarray:
    """Full sorted spectrum for each row of holonomy angles; shape (B, n)."""
    lap = HolonomyLaplacian(g)
    rows = np.asarray(phi_rows, dtype=float).reshape(-1, lap.dim)
    return np.array([np.linalg.eigvalsh(lap.matrix(r)) for r in rows])
