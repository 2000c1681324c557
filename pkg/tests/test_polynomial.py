import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varspec.symcore import Polynomial, poly_add, poly_mul, poly_partial


def _x(power=1, nvars=1, index=0):
    return Polynomial.variable(index, nvars, power)


def test_partial_power_rule():
    p = _x(2)
    assert poly_partial(p, 0).terms == {(1,): 2.0}


def test_difference_of_squares():
    x = Polynomial.variable(0, 2)
    y = Polynomial.variable(1, 2)
    prod = poly_mul(poly_add(x, y), x - y)
    assert prod.terms == {(2, 0): 1.0, (0, 2): -1.0}


def test_additive_inverse_gives_empty_term_map():
    p = Polynomial(2, {(1, 0): 2.0, (0, 3): -1.5})
    assert poly_add(p, -p).terms == {}
    assert poly_add(p, -p).is_zero()


def test_partial_out_of_range():
    with pytest.raises(IndexError):
        poly_partial(_x(2), 1)


def test_mixed_coordinate_counts_rejected():
    with pytest.raises(ValueError):
        poly_add(_x(1, nvars=1), _x(1, nvars=2))
    with pytest.raises(ValueError):
        poly_mul(_x(1, nvars=1), _x(1, nvars=2))


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        Polynomial(1, {(-1,): 1.0})


def test_evaluation_matches_horner_by_hand():
    p = Polynomial(2, {(0, 0): 1.0, (2, 1): -3.0, (1, 2): 2.0})
    pts = np.array([[1.0, 2.0], [-0.5, 3.0]])
    expected = 1.0 - 3.0 * pts[:, 0] ** 2 * pts[:, 1] + 2.0 * pts[:, 0] * pts[:, 1] ** 2
    assert np.allclose(p(pts), expected, rtol=0, atol=0)


@st.composite
def polys(draw, nvars=2, max_deg=4, max_terms=5):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        exps = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars))
        terms[exps] = draw(st.floats(-4, 4, allow_nan=False))
    return Polynomial(nvars, terms)


@given(polys(), polys(), polys())
def test_ring_axioms_on_random_polynomials(p, q, r):
    assert (p + q) == (q + p)
    assert (p * q) == (q * p)
    left = p * (q + r)
    right = p * q + p * r
    # distributivity up to float addition order
    keys = set(left.terms) | set(right.terms)
    for k in keys:
        assert abs(left.terms.get(k, 0.0) - right.terms.get(k, 0.0)) <= 1e-12


@given(polys(), polys())
def test_product_rule_for_partial(p, q):
    d_prod = (p * q).partial(0)
    by_rule = p.partial(0) * q + p * q.partial(0)
    keys = set(d_prod.terms) | set(by_rule.terms)
    for k in keys:
        assert abs(d_prod.terms.get(k, 0.0) - by_rule.terms.get(k, 0.0)) <= 1e-9 * (
            1.0 + abs(by_rule.terms.get(k, 0.0))
        )
