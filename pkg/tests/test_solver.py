import math

import numpy as np
import pytest

from magheight import catalog
from magheight.bounds import combinatorial_bounds
from magheight.graph import Graph, complete, cycle, hypercube, path, petersen, star, wheel
from magheight.potential import is_sk_valued
from magheight.solver import (
    BettiTooLarge, SolverConfig, lambda1_at, nu_average, nu_estimate, nu_grid_oracle, nu_k, nu_signature_bruteforce,
)
from magheight.spectra import lambda1

from corpus import corpus


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(n_multistarts=0)
    with pytest.raises(ValueError):
        SolverConfig(local_tol=-1.0)


def test_c7():
    est = nu_estimate(cycle(7))
    assert est.value == pytest.approx(2 - 2 * math.cos(math.pi / 7), abs=1e-7)
    assert math.cos(est.best.phis[0]) == pytest.approx(-1.0, abs=1e-6)
    assert est.converged


def test_k5():
    assert nu_estimate(complete(5)).value == pytest.approx(3.0, abs=1e-7)


def test_susp_p3():
    g = catalog.fixture("susp_p3")
    est = nu_estimate(g)
    assert est.value == pytest.approx(1.0, abs=1e-7)
    # the two maximizers, read in (alpha, beta) coordinates
    a, b = est.best.phis
    targets = [(2 * math.pi / 3, 4 * math.pi / 3), (4 * math.pi / 3, 2 * math.pi / 3)]
    assert min(abs(np.exp(1j * a) - np.exp(1j * x)) + abs(np.exp(1j * b) - np.exp(1j * y)) for x, y in targets) < 1e-4


def test_self_consistency(rng):
    for g in (wheel(5), petersen(), catalog.fixture("ghat")):
        est = nu_estimate(g, SolverConfig(n_multistarts=8))
        assert lambda1(g, est.potential(g)) == pytest.approx(est.value, abs=1e-9)
        assert lambda1_at(g, est.best) == pytest.approx(est.value, abs=1e-9)
        assert est.value <= min(combinatorial_bounds(g)) + 1e-7
        js = est.to_json()
        assert set(js) == {"nu", "phis", "converged", "multiplicity", "evals"}


def test_forest_short_circuit():
    for g in (path(6), star(4), Graph(1)):
        est = nu_estimate(g)
        assert est.value == 0.0 and est.n_starts == 0


def test_grid_oracle():
    assert nu_grid_oracle(cycle(5), 720) == pytest.approx(2 - 2 * math.cos(math.pi / 5), abs=1e-5)
    assert nu_grid_oracle(catalog.fixture("triangle_dangling"), 720) == pytest.approx((5 - math.sqrt(17)) / 2, abs=1e-5)
    assert nu_grid_oracle(path(4), 720) == 0.0
    with pytest.raises(BettiTooLarge):
        nu_grid_oracle(complete(5), 10)


def test_signature_bruteforce():
    val, sig = nu_signature_bruteforce(complete(4))
    assert val == pytest.approx(2.0, abs=1e-9) and sig.is_signature()
    val, sig = nu_signature_bruteforce(petersen())
    assert val >= 3 - 2 * math.sqrt(2)
    assert lambda1(petersen(), sig) == pytest.approx(val, abs=1e-12)
    val, _ = nu_signature_bruteforce(catalog.fixture("susp_p3"))
    assert val == pytest.approx(0.7639320225, abs=1e-9)
    with pytest.raises(BettiTooLarge):
        nu_signature_bruteforce(complete(8))


def test_nu_k():
    val, s = nu_k(cycle(4), 2)
    assert val == pytest.approx(2 - math.sqrt(2), abs=1e-12) and is_sk_valued(s, 2)
    assert nu_k(path(5), 3)[0] == 0.0
    # both nontrivial powers of the 2pi/3 holonomy give 2 - 2cos(2pi/9)
    val, s = nu_k(cycle(3), 3)
    assert val == pytest.approx(0.467911113762, abs=1e-10)
    assert val == pytest.approx(2 - 2 * math.cos(2 * math.pi / 9), abs=1e-12)
    with pytest.raises(ValueError):
        nu_k(cycle(3), 1)
    with pytest.raises(BettiTooLarge):
        nu_k(complete(6), 5)


def test_nu_k_below_nu():
    for g in corpus(8, seed=3):
        nu = nu_estimate(g).value
        for k in (2, 3, 4):
            assert nu_k(g, k)[0] <= nu + 1e-7


def test_dominates_signatures_and_grid():
    for g in corpus(10, seed=11):
        est = nu_estimate(g)
        assert est.value >= nu_signature_bruteforce(g)[0] - 1e-9
        assert est.value >= nu_grid_oracle(g, 24) - 1e-7


def test_monotone_in_starts():
    for g in (petersen(), hypercube(3)):
        vals = [nu_estimate(g, SolverConfig(n_multistarts=m, stop_at_bound=False)).value for m in (1, 3, 6)]
        assert vals[0] <= vals[1] + 1e-15 and vals[1] <= vals[2] + 1e-15


def test_deterministic_and_worker_independent():
    g = petersen()
    a = nu_estimate(g, SolverConfig(n_multistarts=4, stop_at_bound=False, rng_seed=7))
    b = nu_estimate(g, SolverConfig(n_multistarts=4, stop_at_bound=False, rng_seed=7))
    c = nu_estimate(g, SolverConfig(n_multistarts=4, stop_at_bound=False, rng_seed=7, workers=3))
    assert a.to_json() == b.to_json()
    assert a.value == c.value and np.array_equal(a.best.phis, c.best.phis)


def test_nu_average():
    avg = nu_average(cycle(5), 400)
    assert 0.0 < avg < 2 - 2 * math.cos(math.pi / 5)
    assert nu_average(path(3)) == 0.0
