import math

import numpy as np
import pytest

import ismi_bounds as ib


def test_dual_inverses():
    assert ib.sub_gaussian_inverse(2.0, 0.5) == pytest.approx(2.0)
    assert ib.chi_squared_neg_inverse(2, 1.1, 0.3) == pytest.approx(2 * math.sqrt(2 * 1.1**2 * 0.3), rel=1e-8)
    numeric = ib.legendre_dual_inverse(lambda l: 0.5 * l * l, 0.5)
    assert numeric == pytest.approx(1.0, rel=1e-7)


def test_bad_psi_raises():
    with pytest.raises(ValueError):
        ib.legendre_dual_inverse(lambda l: 1.0 + l * l, 0.5)


def test_mean_example():
    assert ib.mean_exact_gen(2, 1.0, 10) == pytest.approx(0.4)
    assert ib.mean_exact_per_sample_mi(2, 1.0, 10) == pytest.approx(math.log(10 / 9))
    assert ib.mean_ismi_bound(2, 1.0, 10) == pytest.approx(1.0099, abs=5e-5)
    mean, se = ib.mean_monte_carlo_gen(2, 1.0, 10, 2000, 1)
    assert abs(mean - 0.4) < 4 * se


def test_gaussian_mi_matches_closed_form():
    cw = np.eye(1)
    cz = np.eye(1)
    cross = np.array([[0.5]])
    assert ib.gaussian_mi(cw, cz, cross) == pytest.approx(-0.5 * math.log(0.75))


def test_knn_mi_on_numpy_arrays():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((3000, 1))
    b = 0.9 * a + math.sqrt(1 - 0.81) * rng.standard_normal((3000, 1))
    est, se = ib.knn_mi(a, b, k=5)
    assert abs(est + 0.5 * math.log(1 - 0.81)) < 0.05
    assert se > 0


def test_gp_and_sgld():
    assert math.isinf(ib.ismi_bound_gp(1))
    b = ib.ismi_bound_gp(16)
    assert ib.gp_exact_gen(16) <= b < ib.cmi_reference(16)
    assert ib.pensia_bound(100, 10, 1, 1, 1) == pytest.approx(0.28121, abs=1e-5)
    assert ib.analytic_ismi_bound(100, 10, 1, 1, 1) < ib.pensia_bound(100, 10, 1, 1, 1)


def test_full_mi_bound():
    assert math.isinf(ib.full_mi_bound(math.inf, 10, 1.0))
    assert ib.sub_gaussian_ismi([0.5, 0.5], 1.0) == pytest.approx(1.0)


def test_run_experiment():
    csv, ok = ib.run_experiment("selftest", '{"joints": 50}')
    assert ok
    assert csv.splitlines()[0].startswith("check,")
