import math

import numpy as np
import pytest

from varspec.quad import (
    QuadratureError,
    gauss_laguerre,
    gauss_legendre,
    integrate_1d,
    integrate_vector,
)


def test_legendre_one_point():
    rule = gauss_legendre(1)
    assert rule.nodes[0] == pytest.approx(0.0, abs=1e-15)
    assert rule.weights[0] == pytest.approx(2.0, abs=1e-15)


def test_legendre_two_point_classical():
    rule = gauss_legendre(2)
    assert np.allclose(rule.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    assert np.allclose(rule.weights, [1.0, 1.0], atol=1e-15)


def test_legendre_degree_7_exactness():
    rule = gauss_legendre(4)
    assert rule.integrate(lambda x: x**6) == pytest.approx(2.0 / 7.0, abs=1e-14)


def test_laguerre_one_point_total_mass():
    rule = gauss_laguerre(1)
    assert rule.integrate(lambda r: np.ones_like(r)) == pytest.approx(1.0, abs=1e-14)


def test_laguerre_factorials():
    assert gauss_laguerre(3).integrate(lambda r: r**5) == pytest.approx(120.0, rel=1e-12)
    assert gauss_laguerre(5).integrate(lambda r: r**9) == pytest.approx(362880.0, rel=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13, 20, 32, 48])
def test_legendre_exactness_up_to_2n_minus_1(n):
    rule = gauss_legendre(n)
    for k in range(0, 2 * n, 2):
        exact = 2.0 / (k + 1)
        assert rule.integrate(lambda x: x**k) == pytest.approx(exact, rel=1e-12)
    # odd powers vanish by symmetry of the rule
    assert abs(rule.integrate(lambda x: x ** (2 * n - 1))) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13, 20, 32, 48])
def test_laguerre_exactness_up_to_2n_minus_1(n):
    rule = gauss_laguerre(n)
    for k in range(0, 2 * n, max(1, n // 3)):
        assert rule.integrate(lambda r: r**k) == pytest.approx(
            float(math.factorial(k)), rel=1e-12
        )


@pytest.mark.parametrize("n", [2, 7, 15, 31])
def test_rules_match_numpy_references(n):
    x, w = np.polynomial.legendre.leggauss(n)
    rule = gauss_legendre(n)
    assert np.allclose(rule.nodes, x, atol=1e-14)
    assert np.allclose(rule.weights, w, atol=1e-13)
    xl, wl = np.polynomial.laguerre.laggauss(n)
    rl = gauss_laguerre(n)
    assert np.allclose(rl.nodes, xl, atol=1e-11)
    assert np.allclose(rl.weights, wl, atol=1e-12)


def test_rule_rejects_nonpositive_order():
    with pytest.raises(ValueError):
        gauss_legendre(0)
    with pytest.raises(ValueError):
        gauss_laguerre(0)


def test_gaussian_on_real_line():
    val = integrate_1d(lambda x: np.exp(-x * x), tol=1e-12)
    assert val == pytest.approx(math.sqrt(math.pi), rel=1e-11)


def test_quartic_weight_against_trapezoid_oracle():
    f = lambda x: x * x * np.exp(-0.5 * x * x - 0.25 * x**4)
    # brute-force oracle: 10^6-point trapezoid on a generous window
    xs = np.linspace(-12.0, 12.0, 1_000_001)
    oracle = np.trapezoid(f(xs), xs)
    assert integrate_1d(f) == pytest.approx(oracle, rel=1e-8)


def test_odd_integrand_vanishes():
    val = integrate_1d(lambda x: x**3 * np.exp(-x * x), tol=1e-10)
    assert abs(val) < 1e-10


def test_halfline_domain():
    val = integrate_1d(lambda r: np.exp(-r), domain="halfline")
    assert val == pytest.approx(1.0, rel=1e-10)


def test_vector_components_integrate_together():
    def f(x):
        return np.stack([np.exp(-x * x), x * x * np.exp(-x * x)], axis=1)

    vals = integrate_vector(f)
    assert vals[0] == pytest.approx(math.sqrt(math.pi), rel=1e-10)
    assert vals[1] == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-10)


def test_determinism_bit_identical():
    f = lambda x: np.exp(-0.37 * x * x - 0.11 * x**4)
    assert integrate_1d(f) == integrate_1d(f)
    r1, r2 = gauss_legendre(17), gauss_legendre(17)
    assert r1.nodes is r2.nodes  # cached rule object


def test_budget_exhaustion_reports_best_estimate():
    f = lambda x: np.exp(-x * x)
    with pytest.raises(QuadratureError) as err:
        integrate_1d(f, tol=1e-13, max_panels=2)
    assert err.value.best is not None
    assert err.value.err_est is not None
    assert float(err.value.best[0]) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-2)
