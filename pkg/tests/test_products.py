"""Inner products over all kernel-pair routes, checked against independent
quadrature oracles and exact parity/symmetry properties."""

import math

import numpy as np
import pytest

from varspec.quad import gauss_legendre, integrate_1d
from varspec.symcore import (
    CoupledXY,
    IsoGaussian,
    PolyExp,
    Polynomial,
    Quartic1D,
    UnsupportedKernelPairError,
    WaveFunction,
    inner_product,
    norm_sq,
)

RNG = np.random.default_rng(20240817)


def _mono(exps, coeff=1.0):
    return Polynomial.monomial(exps, coeff)


def _pe(terms, kernel):
    return PolyExp(Polynomial(kernel.dim, terms), kernel)


def test_gaussian_self_overlap():
    f = _pe({(0,): 1.0}, IsoGaussian(1.0, 1))
    assert inner_product(f, f) == pytest.approx(math.sqrt(math.pi), rel=1e-14)


def test_parity_kills_odd_pairs_exactly():
    even = _pe({(0,): 1.0}, IsoGaussian(1.0, 1))
    odd = _pe({(1,): 1.0}, IsoGaussian(1.0, 1))
    assert inner_product(odd, even) == 0.0


def test_six_coordinate_gaussian_norm_is_pi_cubed():
    psi = _pe({(0,) * 6: 1.0}, IsoGaussian(1.0, 6))
    assert norm_sq(psi) == pytest.approx(math.pi**3, rel=1e-13)


def test_dimension_mismatch_rejected():
    f = _pe({(0,): 1.0}, IsoGaussian(1.0, 1))
    g = _pe({(0, 0): 1.0}, IsoGaussian(1.0, 2))
    with pytest.raises(ValueError):
        inner_product(f, g)


def test_coupled_pair_without_x_decay_rejected():
    # combined b == 0 leaves a non-normalizable x tail
    f = _pe({(0, 0): 1.0}, CoupledXY(1.0, 0.0, 1.0))
    with pytest.raises(ValueError):
        norm_sq(f)


def test_unsupported_kernel_pair():
    f = _pe({(0,): 1.0}, Quartic1D(1.0, 0.5))
    g = _pe({(0, 0): 1.0}, CoupledXY(1.0, 1.0, 0.1))
    with pytest.raises((UnsupportedKernelPairError, ValueError)):
        inner_product(f, g)


def _random_polyexp(kernel, max_deg=4, terms=3):
    t = {}
    for _ in range(terms):
        exps = tuple(int(RNG.integers(0, max_deg + 1)) for _ in range(kernel.dim))
        t[exps] = float(RNG.uniform(-2, 2))
    t[(0,) * kernel.dim] = 1.0
    return _pe(t, kernel)


def test_symmetry_is_exact_on_every_route():
    kernels = [
        (IsoGaussian(0.9, 1), IsoGaussian(1.7, 1)),
        (Quartic1D(1.1, 0.4), Quartic1D(0.6, 0.2)),
        (CoupledXY(0.5, 0.8, 0.2), CoupledXY(0.7, 0.3, 0.1)),
        (IsoGaussian(1.2, 2), CoupledXY(0.7, 0.3, 0.1)),
        (IsoGaussian(1.2, 1), Quartic1D(0.6, 0.2)),
    ]
    for k1, k2 in kernels:
        f = _random_polyexp(k1)
        g = _random_polyexp(k2)
        assert inner_product(f, g) == inner_product(g, f)  # bit-identical


def test_bilinearity_exact_arithmetic_on_gaussian_route():
    k1, k2, k3 = IsoGaussian(0.8, 1), IsoGaussian(1.3, 1), IsoGaussian(2.1, 1)
    f = _random_polyexp(k1)
    g = _random_polyexp(k2)
    h = _random_polyexp(k3)
    a, b = 0.625, -1.5  # exactly representable
    left = inner_product(WaveFunction([f.scaled(a), g.scaled(b)]), h)
    right = a * inner_product(f, h) + b * inner_product(g, h)
    assert left == pytest.approx(right, rel=1e-12, abs=1e-12)


def test_bilinearity_on_quadrature_routes():
    f = _random_polyexp(Quartic1D(1.1, 0.4))
    g = _random_polyexp(Quartic1D(0.6, 0.2))
    h = _random_polyexp(Quartic1D(0.9, 0.1))
    a, b = 1.25, -0.5
    left = inner_product(WaveFunction([f.scaled(a), g.scaled(b)]), h)
    right = a * inner_product(f, h) + b * inner_product(g, h)
    assert left == pytest.approx(right, rel=1e-9, abs=1e-11)


def test_iso_route_matches_direct_quadrature_on_50_random_instances():
    for _ in range(50):
        omega1 = float(RNG.uniform(0.3, 3.0))
        omega2 = float(RNG.uniform(0.3, 3.0))
        f = _random_polyexp(IsoGaussian(omega1, 1))
        g = _random_polyexp(IsoGaussian(omega2, 1))
        symbolic = inner_product(f, g)

        def integrand(x):
            pts = x[:, None]
            return f.evaluate(pts) * g.evaluate(pts)

        numeric = integrate_1d(integrand, tol=1e-12)
        assert numeric == pytest.approx(symbolic, rel=1e-9, abs=1e-9)


def _tensor_oracle_2d(f, g, half=9.0, n=220):
    """Dense tensor Gauss-Legendre quadrature over a large box."""
    rule = gauss_legendre(n)
    x = half * rule.nodes
    w = half * rule.weights
    xx, yy = np.meshgrid(x, x, indexing="ij")
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    vals = (f.evaluate(pts) * g.evaluate(pts)).reshape(n, n)
    return float(w @ vals @ w)


def test_coupled_route_matches_2d_tensor_oracle():
    for _ in range(12):
        k1 = CoupledXY(*(float(v) for v in RNG.uniform(0.3, 1.2, 3)))
        k2 = CoupledXY(*(float(v) for v in RNG.uniform(0.3, 1.2, 3)))
        f = _random_polyexp(k1, max_deg=3)
        g = _random_polyexp(k2, max_deg=3)
        assert inner_product(f, g) == pytest.approx(_tensor_oracle_2d(f, g), rel=1e-8, abs=1e-8)


def test_planar_gaussian_coerces_into_coupled_route():
    iso = _pe({(2, 0): 1.0, (0, 0): 0.5}, IsoGaussian(1.4, 2))
    coupled = _pe({(0, 2): 1.0, (0, 0): 1.0}, CoupledXY(0.5, 0.6, 0.3))
    assert inner_product(iso, coupled) == pytest.approx(_tensor_oracle_2d(iso, coupled), rel=1e-8)


def test_separable_coupled_pair_uses_exact_moments():
    # c1 + c2 == 0 decouples x and y: compare against the product of 1-D moments
    f = _pe({(2, 2): 1.0}, CoupledXY(0.7, 0.4, 0.0))
    g = _pe({(0, 0): 1.0}, CoupledXY(0.3, 0.6, 0.0))
    from varspec.symcore import gaussian_moment

    expected = gaussian_moment(2, 1.0) * gaussian_moment(2, 1.0)
    assert inner_product(f, g) == pytest.approx(expected, rel=1e-13)


def test_quartic_route_matches_direct_quadrature():
    for _ in range(10):
        k1 = Quartic1D(float(RNG.uniform(0.2, 2.0)), float(RNG.uniform(0.05, 1.0)))
        k2 = Quartic1D(float(RNG.uniform(0.2, 2.0)), float(RNG.uniform(0.05, 1.0)))
        f = _random_polyexp(k1)
        g = _random_polyexp(k2)

        def integrand(x):
            pts = x[:, None]
            return f.evaluate(pts) * g.evaluate(pts)

        numeric = integrate_1d(integrand, tol=1e-12)
        assert inner_product(f, g) == pytest.approx(numeric, rel=1e-9, abs=1e-10)
