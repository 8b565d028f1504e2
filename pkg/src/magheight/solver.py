"""Estimating the magneto-spectral height nu(G) = sup_sigma lambda_1(Delta^sigma).

After gauge reduction the search space is the holonomy torus [0, 2pi)^{b1}.
Local refinement maximizes a soft-min of the spectrum,

    F_tau(phi) = -tau * log(sum_i exp(-lambda_i(phi) / tau)),

which is smooth, sits within tau*log(N) below lambda_1, and is driven to
lambda_1 by shrinking tau. Its gradient is tr(P dA) with P the softmax-weighted
spectral projector, so degenerate eigenvalues (where the maxima usually live)
cause no trouble. A short Nelder-Mead pass on lambda_1 itself follows on
low-dimensional tori.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .graph import Graph, betti_number, spanning_forest
from .potential import TWO_PI, HolonomyCoordinates, MagneticPotential, expand, gauge_reduce, anti_balanced
from .spectra import HolonomyLaplacian

TAU_SCHEDULE = (0.3, 0.1, 0.03, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6, 3e-7, 1e-7, 1e-8)
GRID_MAX_DIM = 3
RANDOM_SCAN = 2048
SIGNATURE_SEED_MAX_B1 = 14
NELDER_MEAD_MAX_DIM = 8
MULTIPLICITY_TOL = 1e-6
CERTIFY_TOL = 1e-9


class BettiTooLarge(ValueError):
    pass


@dataclass
class SolverConfig:
    grid_points_per_dim: int = 24
    n_multistarts: int = 50
    local_tol: float = 1e-10
    max_iters: int = 2000
    rng_seed: int = 0
    workers: int = 1
    # stop as soon as a start reaches a proven upper bound
    stop_at_bound: bool = True

    def __post_init__(self):
        for name in ("grid_points_per_dim", "n_multistarts", "max_iters", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.local_tol <= 0:
            raise ValueError("local_tol must be positive")


@dataclass
class NuEstimate:
    value: float
    best: HolonomyCoordinates
    n_starts: int
    n_evals: int
    converged: bool
    lambda1_multiplicity_at_max: int
    upper_bound: float = math.inf
    start_values: list = field(default_factory=list, repr=False)

    @property
    def certified(self) -> bool:
        """True when the estimate meets a proven upper bound, i.e. is exact."""
        return self.value >= self.upper_bound - CERTIFY_TOL

    def potential(self, g: Graph) -> MagneticPotential:
        return expand(g, self.best)

    def to_json(self) -> dict:
        return {
            "nu": float(self.value),
            "phis": [float(p) for p in self.best.phis],
            "converged": bool(self.converged),
            "multiplicity": int(self.lambda1_multiplicity_at_max),
            "evals": int(self.n_evals),
        }


class _Counter:
    def __init__(self):
        self.n = 0


def _softmin(phis, lap: HolonomyLaplacian, tau, counter):
    counter.n += 1
    w, V = lap.eigh(phis)
    shifted = w - w[0]
    ex = np.exp(-shifted / tau)
    z = ex.sum()
    weights = ex / z
    value = w[0] - tau * math.log(z)
    proj = np.einsum("ki,i,ki->k", V[lap.cols], weights, V[lap.rows].conj())
    grad = 2.0 * np.imag(np.exp(1j * phis) * proj)
    return -value, -grad


def _refine(lap: HolonomyLaplacian, x0, cfg: SolverConfig):
    counter = _Counter()
    x = np.array(x0, dtype=float)
    ok = True
    for tau in TAU_SCHEDULE:
        res = minimize(
            _softmin, x, args=(lap, tau, counter), jac=True, method="L-BFGS-B",
            options={"maxiter": cfg.max_iters, "gtol": 1e-12, "ftol": 1e-15},
        )
        x = res.x
        ok = bool(res.success)
    value = lap.lambda1(x)
    counter.n += 1
    if lap.dim <= NELDER_MEAD_MAX_DIM:
        def neg(p):
            counter.n += 1
            return -lap.lambda1(p)

        simplex = np.vstack([x] + [x + 1e-4 * e for e in np.eye(lap.dim)])
        res = minimize(
            neg, x, method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": cfg.local_tol, "fatol": cfg.local_tol * 1e-2,
                     "maxiter": cfg.max_iters},
        )
        if -res.fun > value:
            x, value = res.x, -res.fun
    return np.mod(x, TWO_PI), value, ok, counter.n


def _signature_table(lap: HolonomyLaplacian) -> np.ndarray:
    """lambda_1 for every sign pattern on the cotree, lexicographic order."""
    b1 = lap.dim
    n = lap.graph.n_vertices
    base = lap.base.real.copy()
    out = np.empty(1 << b1)
    patterns = np.array(list(itertools.product((0, 1), repeat=b1)), dtype=np.int8).reshape(-1, b1)
    chunk = max(1, (1 << 24) // (8 * n * n))
    for start in range(0, len(patterns), chunk):
        block = patterns[start:start + chunk]
        mats = np.broadcast_to(base, (len(block), n, n)).copy()
        vals = -(1.0 - 2.0 * block)  # entry is -sigma, sigma = +-1
        mats[:, lap.rows, lap.cols] = vals
        mats[:, lap.cols, lap.rows] = vals
        out[start:start + len(block)] = np.linalg.eigvalsh(mats)[:, 0]
    return np.maximum(out, 0.0), patterns


def _seeds(g: Graph, lap: HolonomyLaplacian, cfg: SolverConfig, counter: _Counter) -> list[np.ndarray]:
    seeds = []
    abal, _ = gauge_reduce(g, anti_balanced(g), lap.forest)
    seeds.append(np.array(abal.phis))
    if lap.dim <= SIGNATURE_SEED_MAX_B1:
        table, patterns = _signature_table(lap)
        counter.n += len(table)
        seeds.append(math.pi * patterns[int(np.argmax(table))].astype(float))
    rng = np.random.default_rng(cfg.rng_seed)
    if lap.dim <= GRID_MAX_DIM:
        axis = np.arange(cfg.grid_points_per_dim) * (TWO_PI / cfg.grid_points_per_dim)
        points = np.array(list(itertools.product(axis, repeat=lap.dim)))
    else:
        points = rng.uniform(0.0, TWO_PI, (RANDOM_SCAN, lap.dim))
    values = lap.lambda1_batch(points)
    counter.n += len(points)
    order = np.argsort(-values, kind="stable")
    seeds += [points[i] for i in order]
    # fresh random starts so the start count is never limited by a small grid
    seeds += list(rng.uniform(0.0, TWO_PI, (cfg.n_multistarts, lap.dim)))
    return seeds[: cfg.n_multistarts]


def nu_estimate(g: Graph, cfg: SolverConfig | None = None, upper_bound: float | None = None) -> NuEstimate:
    """Best-found lambda_1 over the holonomy torus: a certified lower bound on nu(G)."""
    cfg = cfg or SolverConfig()
    forest = spanning_forest(g)
    lap = HolonomyLaplacian(g, forest)
    if upper_bound is None:
        from .bounds import certified_upper_bound

        upper_bound = certified_upper_bound(g)
    if lap.dim == 0:
        coords = HolonomyCoordinates(forest, [])
        mult = int(np.sum(np.abs(np.linalg.eigvalsh(lap.base)) <= MULTIPLICITY_TOL)) if g.n_vertices else 0
        return NuEstimate(0.0, coords, 0, 0, True, mult, upper_bound=0.0)

    counter = _Counter()
    seeds = _seeds(g, lap, cfg, counter)

    best_x, best_val, best_ok = None, -1.0, False
    start_values = []
    n_done = 0
    batch = cfg.workers if cfg.workers > 1 else 1
    pool = ThreadPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for i in range(0, len(seeds), batch):
            group = seeds[i:i + batch]
            if pool is None:
                results = [_refine(lap, s, cfg) for s in group]
            else:
                results = list(pool.map(lambda s: _refine(lap, s, cfg), group))
            stop = False
            for x, val, ok, nev in results:
                counter.n += nev
                n_done += 1
                start_values.append(val)
                if val > best_val:
                    best_x, best_val, best_ok = x, val, ok
                if cfg.stop_at_bound and best_val >= upper_bound - CERTIFY_TOL:
                    stop = True
                    break
            if stop:
                break
    finally:
        if pool is not None:
            pool.shutdown()

    w = np.linalg.eigvalsh(lap.matrix(best_x))
    mult = int(np.sum(np.abs(w - w[0]) <= MULTIPLICITY_TOL))
    coords = HolonomyCoordinates(forest, best_x)
    value = max(0.0, float(w[0]))
    converged = best_ok or value >= upper_bound - CERTIFY_TOL
    return NuEstimate(value, coords, n_done, counter.n, converged, mult, upper_bound, start_values)


def nu_grid_oracle(g: Graph, points_per_dim: int) -> float:
    """Maximum of lambda_1 over the uniform grid on the holonomy torus (no refinement)."""
    lap = HolonomyLaplacian(g)
    if lap.dim > 3:
        raise BettiTooLarge(f"grid oracle limited to b1 <= 3, got {lap.dim}")
    if lap.dim == 0:
        return 0.0
    axis = np.arange(points_per_dim) * (TWO_PI / points_per_dim)
    best = 0.0
    # iterate over the first coordinate to bound memory
    rest = np.array(list(itertools.product(axis, repeat=lap.dim - 1)), dtype=float).reshape(-1, lap.dim - 1) \
        if lap.dim > 1 else np.zeros((1, 0))
    for a in axis:
        pts = np.hstack([np.full((len(rest), 1), a), rest])
        best = max(best, float(lap.lambda1_batch(pts).max()))
    return best


def nu_signature_bruteforce(g: Graph) -> tuple[float, MagneticPotential]:
    """Best lambda_1 over all 2^{b1} switching classes of signatures."""
    lap = HolonomyLaplacian(g)
    if lap.dim > 20:
        raise BettiTooLarge(f"signature enumeration limited to b1 <= 20, got {lap.dim}")
    if lap.dim == 0:
        return 0.0, expand(g, HolonomyCoordinates(lap.forest, []))
    table, patterns = _signature_table(lap)
    i = int(np.argmax(table))
    coords = HolonomyCoordinates(lap.forest, math.pi * patterns[i].astype(float))
    return float(table[i]), expand(g, coords)


def nu_k(g: Graph, k: int) -> tuple[float, MagneticPotential]:
    """sup over S_k-valued potentials of min_{1<=j<k} lambda_1(sigma^j), by enumeration."""
    if k < 2:
        raise ValueError("k must be at least 2")
    lap = HolonomyLaplacian(g)
    b1 = lap.dim
    if k ** b1 > 10 ** 6:
        raise BettiTooLarge(f"k^b1 = {k}^{b1} exceeds the enumeration limit")
    if b1 == 0:
        return 0.0, expand(g, HolonomyCoordinates(lap.forest, []))
    exps = np.array(list(itertools.product(range(k), repeat=b1)), dtype=np.int64)
    table = lap.lambda1_batch(exps * (TWO_PI / k))
    weights = k ** np.arange(b1 - 1, -1, -1)
    objective = np.full(len(exps), np.inf)
    for j in range(1, k):
        objective = np.minimum(objective, table[((j * exps) % k) @ weights])
    i = int(np.argmax(objective))
    coords = HolonomyCoordinates(lap.forest, exps[i] * (TWO_PI / k))
    return float(objective[i]), expand(g, coords)


def nu_average(g: Graph, n_samples: int = 1000, rng_seed: int = 0) -> float:
    """Mean of lambda_1 over uniformly random holonomies."""
    lap = HolonomyLaplacian(g)
    if lap.dim == 0:
        return 0.0
    rng = np.random.default_rng(rng_seed)
    return float(lap.lambda1_batch(rng.uniform(0.0, TWO_PI, (n_samples, lap.dim))).mean())


def lambda1_at(g: Graph, coords: HolonomyCoordinates) -> float:
    return HolonomyLaplacian(g, coords.forest).lambda1(coords.phis)


def betti_guard(g: Graph, limit: int) -> int:
    b1 = betti_number(g)
    if b1 > limit:
        raise BettiTooLarge(f"b1 = {b1} exceeds {limit}")
    return b1
