"""Cut-off diagonalization: bases, pairing, assembly, eigensolver oracles."""

import math

import numpy as np
import pytest

from varspec.cutoff import (
    AngularBasis,
    CutoffMatrix,
    RadialBasis,
    assemble,
    convergence_scan,
    lowest_eigenvalues,
    matrix_element,
    pairing,
    unpairing,
)
from varspec.cutoff import _genlaguerre_all, _radial_norm
from varspec.quad import gauss_laguerre, gauss_legendre


def test_pairing_base_values():
    assert pairing(0, 0) == 0
    assert pairing(1, 0) == 1
    assert pairing(0, 1) == 2


def test_pairing_bijection_up_to_50():
    seen = {}
    for l in range(51):
        for n in range(51):
            a = pairing(l, n)
            assert a not in seen
            seen[a] = (l, n)
            assert unpairing(a) == (l, n)
    # forward map of consecutive integers is onto the triangle
    assert sorted(seen)[: len(seen)] == sorted(seen)


def test_unpairing_of_small_indices_by_forward_table():
    forward = {pairing(l, n): (l, n) for l in range(8) for n in range(8)}
    for a in range(21):
        assert unpairing(a) == forward[a]


def test_radial_orthonormality():
    basis = RadialBasis(12)
    rule = gauss_laguerre(48)
    r, w = rule.nodes, rule.weights
    weight = np.exp(r) * r**5  # fold phi_n phi_m r^5 into the e^(-r) rule
    for n in range(13):
        for m in range(n, 13):
            val = w @ (basis.value(n, r) * basis.value(m, r) * weight)
            assert val == pytest.approx(1.0 if n == m else 0.0, abs=1e-10)


def test_radial_derivative_matches_finite_differences():
    basis = RadialBasis(6)
    r = np.linspace(0.3, 18.0, 25)
    h = 1e-6
    for n in (0, 1, 4, 6):
        fd = (basis.value(n, r + h) - basis.value(n, r - h)) / (2 * h)
        assert np.allclose(basis.derivative(n, r), fd, rtol=1e-6, atol=1e-8)


def test_angular_orthonormality():
    basis = AngularBasis(10)
    rule = gauss_legendre(32)
    for l in range(11):
        for lp in range(l, 11):
            val = rule.weights @ (basis.value(l, rule.nodes) * basis.value(lp, rule.nodes))
            assert val == pytest.approx(1.0 if l == lp else 0.0, abs=1e-12)


def test_angular_potential_overlap_monopole():
    # <P~0, (1-u) P~0> = 1 by direct quadrature
    basis = AngularBasis(1)
    rule = gauss_legendre(8)
    val = rule.weights @ ((1 - rule.nodes) * basis.value(0, rule.nodes) ** 2)
    assert val == pytest.approx(1.0, abs=1e-14)


def test_matrix_element_symmetry():
    rng = np.random.default_rng(11)
    for _ in range(10):
        l, n, lp, np_ = (int(v) for v in rng.integers(0, 7, 4))
        a = matrix_element(l, n, lp, np_, "repulsive")
        b = matrix_element(lp, np_, l, n, "repulsive")
        assert a == pytest.approx(b, abs=1e-10)


def test_angular_selection_rule():
    # the potential couples only |l - l'| <= 1; l' = l + 2 leaves pure kinetics
    assert matrix_element(0, 0, 2, 0, "repulsive") == 0.0
    assert matrix_element(1, 3, 3, 1, "repulsive") == 0.0


def _legendre_all(lmax, u):
    out = np.empty((lmax + 1, len(u)))
    out[0] = 1.0
    if lmax >= 1:
        out[1] = u
    for j in range(2, lmax + 1):
        out[j] = ((2 * j - 1) * u * out[j - 1] - (j - 1) * out[j - 2]) / j
    return out


def _element_oracle(l, n, lp, np_, sign):
    """Dense 2-D tensor quadrature of <f_{l'n'}, H f_{ln}> with the operator
    applied pointwise: second derivatives and the angular operator evaluated
    directly, no eigenrelation, no integration by parts, no selection rule."""
    rr = gauss_laguerre(80)
    uu = gauss_legendre(60)
    r, wr = rr.nodes, rr.weights
    u, wu = uu.nodes, uu.weights
    nn = _radial_norm(n)
    lag = _genlaguerre_all(n, 5, r)[n]
    dlag = -_genlaguerre_all(n - 1, 6, r)[n - 1] if n >= 1 else np.zeros_like(r)
    d2lag = _genlaguerre_all(n - 2, 7, r)[n - 2] if n >= 2 else np.zeros_like(r)
    p = nn * lag
    dp = nn * (dlag - 0.5 * lag)
    d2p = nn * (d2lag - dlag + 0.25 * lag)
    pm = _radial_norm(np_) * _genlaguerre_all(np_, 5, r)[np_]
    leg = _legendre_all(max(l, lp) + 1, u)
    pl = leg[l]
    dpl = l * (leg[l - 1] - u * leg[l]) / (1 - u * u) if l >= 1 else np.zeros_like(u)
    d2pl = (2 * u * dpl - l * (l + 1) * pl) / (1 - u * u)
    nl = math.sqrt((2 * l + 1) / 2)
    nlp = math.sqrt((2 * lp + 1) / 2)
    angular_operator = (1 - u * u) * d2pl - 2 * u * dpl
    sign_factor = -1.0 if sign == "repulsive" else 1.0
    radial_kinetic = -(d2p + 5 * dp / r)
    val = (wr @ (pm * radial_kinetic * r**5)) * (wu @ (nlp * leg[lp] * nl * pl))
    val += 16 * sign_factor * (wr @ (pm * p * r**3)) * (wu @ (nlp * leg[lp] * nl * angular_operator))
    val += 0.125 * (wr @ (pm * p * r**9)) * (wu @ (nlp * leg[lp] * nl * (1 - u) * pl))
    return val


def test_matrix_elements_against_dense_2d_oracle():
    rng = np.random.default_rng(23)
    checked = 0
    while checked < 12:
        l, n, lp, np_ = (int(v) for v in rng.integers(0, 7, 4))
        for sign in ("repulsive", "as_written"):
            got = matrix_element(l, n, lp, np_, sign)
            want = _element_oracle(l, n, lp, np_, sign)
            assert got == pytest.approx(want, rel=1e-7, abs=1e-7)
        checked += 1


def test_assemble_symmetric_and_nested():
    m30 = assemble(30, "repulsive")
    assert np.max(np.abs(m30.entries - m30.entries.T)) < 1e-10
    m12 = assemble(12, "repulsive")
    assert np.allclose(m30.entries[:13, :13], m12.entries, rtol=0, atol=0)
    assert m30.index_pairs[:13] == m12.index_pairs


def test_single_entry_truncation():
    m = assemble(0, "repulsive")
    assert m.entries.shape == (1, 1)
    assert m.entries[0, 0] == pytest.approx(matrix_element(0, 0, 0, 0, "repulsive"))


def test_lowest_eigenvalues_on_diagonal_and_2x2():
    diag = CutoffMatrix.__new__(CutoffMatrix)  # bypass: plain arrays are accepted too
    vals = lowest_eigenvalues(np.diag([3.0, -1.0, 2.0]), 3)
    assert vals == pytest.approx([-1.0, 2.0, 3.0])
    vals2 = lowest_eigenvalues(np.array([[2.0, 1.0], [1.0, 2.0]]), 2)
    assert vals2 == pytest.approx([1.0, 3.0])


def _householder_tridiagonal(a):
    """Own Householder reduction (independent of LAPACK) to tridiagonal form."""
    a = a.copy()
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1 :, k].copy()
        alpha = -math.copysign(np.linalg.norm(x), x[0] if x[0] != 0 else 1.0)
        if abs(alpha) < 1e-300:
            continue
        v = x.copy()
        v[0] -= alpha
        norm = np.linalg.norm(v)
        if norm < 1e-300:
            continue
        v /= norm
        h = np.eye(n)
        h[k + 1 :, k + 1 :] -= 2.0 * np.outer(v, v)
        a = h @ a @ h
    return np.diag(a), np.diag(a, 1)


def _sturm_count(diag, off, x):
    """Number of eigenvalues of the tridiagonal matrix below x."""
    count = 0
    q = 1.0
    for i in range(len(diag)):
        b2 = off[i - 1] ** 2 if i > 0 else 0.0
        q = diag[i] - x - (b2 / q if q != 0 else b2 / 1e-300)
        if q < 0:
            count += 1
    return count


def _sturm_eigenvalues(a, k):
    diag, off = _householder_tridiagonal(a)
    lo = float(np.min(diag) - np.sum(np.abs(off)) - 1.0)
    hi = float(np.max(diag) + np.sum(np.abs(off)) + 1.0)
    out = []
    for idx in range(k):
        a_, b_ = lo, hi
        for _ in range(100):
            mid = 0.5 * (a_ + b_)
            if _sturm_count(diag, off, mid) >= idx + 1:
                b_ = mid
            else:
                a_ = mid
        out.append(0.5 * (a_ + b_))
    return out


def test_eigensolver_against_sturm_bisection_oracle():
    rng = np.random.default_rng(2024)
    for trial in range(50):
        n = 50
        m = rng.normal(size=(n, n))
        m = 0.5 * (m + m.T)
        got = lowest_eigenvalues(m, 5)
        want = _sturm_eigenvalues(m, 5)
        assert np.allclose(got, want, atol=1e-8)


def test_convergence_scan_monotone_and_interlacing():
    rows = convergence_scan([10, 20, 30, 40], 5, "repulsive")
    for (n1, v1), (n2, v2) in zip(rows, rows[1:]):
        for a, b in zip(v2, v1):
            assert a <= b + 1e-9


def test_convergence_scan_rejects_unsorted():
    with pytest.raises(ValueError):
        convergence_scan([20, 10], 3, "repulsive")


def test_unknown_sign_convention():
    with pytest.raises(ValueError):
        matrix_element(0, 0, 0, 0, "sideways")
