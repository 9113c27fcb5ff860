import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cone_zeta import genseries as gs
from cone_zeta.bessel import GAMMA_TILDE, tau
from cone_zeta.symplectic import SpectralSpec, angle_block

from conftest import random_lagrangian, random_spec

NU = 0.3
T = tau(NU)


def _terms(series):
    return {(ell, k): c for (ell, k), c in series.terms.items()}


def test_det_p_fmp():
    spec = SpectralSpec(0, (0.4,), 1.0)
    p = gs.det_p([[2.0]], [[3.0]], spec)
    assert _terms(p) == pytest.approx({(0, (0,)): 2.0, (0, (1,)): -3.0 * tau(0.4)})


def test_det_p_countk():
    p = gs.det_p([[0, 1], [-1, 0]], np.eye(2), SpectralSpec(1, (NU,), 1.0))
    assert _terms(p) == pytest.approx({(0, (0,)): 1.0, (1, (1,)): T})


def test_det_p_count3k():
    a = [[0, 1, -1], [1, 0, 0], [1, 0, 0]]
    p = gs.det_p(a, np.eye(3), SpectralSpec(2, (NU,), 1.0))
    assert _terms(p) == pytest.approx({(1, (0,)): -1.0, (0, (1,)): T, (2, (1,)): -T})


@pytest.mark.parametrize("seed", range(10))
def test_det_p_matches_substitution(seed):
    rng = np.random.default_rng(seed)
    for q0, q1 in [(0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (0, 3)]:
        spec = random_spec(rng, q0, q1)
        a, b = random_lagrangian(rng, q0, q1, complex_=bool(seed % 2))
        p = gs.det_p(a, b, spec)
        x, y = rng.uniform(0.1, 2.0), rng.uniform(0.1, 1.0)
        num = gs.substituted_det(a, b, spec, x, y)
        assert abs(p.evaluate(x, y) - num) <= 1e-10 * max(1.0, abs(num))


def test_normalize_leading_examples():
    nus = (NU,)
    alpha, beta = 2.0, 0.5
    p = gs.GenSeries(nus, {(0, (0,)): alpha, (0, (1,)): -beta * T})
    j0, key, a, tail = gs.normalize_leading(p)
    assert (j0, key.value, a) == (0, 0.0, alpha)
    assert _terms(tail) == pytest.approx({(0, (1,)): -T * beta / alpha})

    p = gs.GenSeries(nus, {(1, (0,)): -1.0, (0, (1,)): T, (2, (1,)): -T})
    j0, key, a, tail = gs.normalize_leading(p)
    assert (j0, key.value, a) == (1, 0.0, -1.0)
    assert _terms(tail) == pytest.approx({(-1, (1,)): -T, (1, (1,)): T})

    j0, key, a, tail = gs.normalize_leading(gs.GenSeries(nus, {(0, (0,)): 4.0}))
    assert (j0, key.value, a, len(tail)) == (0, 0.0, 4.0, 0)


def test_normalize_leading_degenerate():
    with pytest.raises(gs.DegenerateDeterminantError, match="degenerate Lagrangian determinant"):
        gs.normalize_leading(gs.GenSeries((NU,)))


def test_normalize_leading_picks_smallest_exponent():
    p = gs.GenSeries((0.3, 0.5), {(0, (0, 1)): 1.0, (2, (1, 0)): 2.0, (1, (1, 0)): 3.0})
    j0, key, a, tail = gs.normalize_leading(p)
    assert key.kvec == (1, 0) and j0 == 1 and a == 3.0


def test_log_expand_fmp():
    r = 0.7
    tail = gs.GenSeries((NU,), {(0, (1,)): -r})
    ct = gs.extract_markers(gs.log_expand(tail, 6.0, 12))
    for k in range(1, 21):
        assert ct.coeff(0, NU * k) == pytest.approx(-(r**k) / k, rel=1e-13)
        e = ct.entry(NU * k)
        assert e.p == 0 and e.ell is None and not e.unreliable
    assert ct.L == []


def test_log_expand_countk():
    tail = gs.GenSeries((NU,), {(1, (1,)): T})
    ct = gs.extract_markers(gs.log_expand(tail, 6.0, 12))
    for k in range(1, 13):
        e = ct.entry(NU * k)
        assert e.coeffs == {k: pytest.approx((-1) ** (k - 1) * T**k / k, rel=1e-13)}
        assert e.p is None and e.ell == k
    assert ct.P == []
    # beyond lmax the l_xi marker cannot be established
    assert ct.entry(NU * 13) is None or ct.entry(NU * 13).unreliable


def test_log_expand_count3k():
    tail = gs.GenSeries((NU,), {(1, (1,)): T, (-1, (1,)): -T})
    ct = gs.extract_markers(gs.log_expand(tail, 6.0, 12))
    for k in range(1, 21):
        e = ct.entry(NU * k)
        for j in range(k + 1):
            ell = 2 * j - k
            if ell > 12:
                continue
            assert e.c(ell) == pytest.approx((-1) ** (j - 1) / k * T**k * math.comb(k, j), rel=1e-12)
        assert e.p == -k
        if 1 + (k % 2 == 0) <= 12:
            assert e.ell == (1 if k % 2 else 2)


def test_log_expand_rejects_constant():
    with pytest.raises(gs.PreconditionError):
        gs.log_expand(gs.GenSeries((NU,), {(0, (0,)): 0.1}), 3.0, 4)


def test_log_expand_numeric_oracle():
    nus = (0.35, 0.6)
    tail = gs.GenSeries(nus, {(0, (1, 0)): 0.8, (1, (0, 1)): -0.5, (0, (1, 1)): 0.3, (2, (0, 0)): 0.0})
    ct = gs.log_expand(tail, 6.0, 40)
    x, y = 0.9, 0.02
    approx = ct.as_series().evaluate(x, y)
    exact = cmath.log(1 + tail.evaluate(x, y))
    assert abs(approx - exact) < 1e-14


def test_merge_rationally_dependent_exponents():
    nus = (0.6, 0.3)
    tail = gs.GenSeries(nus, {(0, (1, 0)): 0.5, (0, (0, 2)): 0.25})
    ct = gs.log_expand(tail, 2.0, 4)
    e = ct.entry(0.6)
    assert e.kvec == (0, 2)
    assert e.c(0) == pytest.approx(0.75)
    assert len([x for x in ct.entries if abs(x.xi - 0.6) < 1e-9]) == 1


@given(
    st.floats(-1.5, 1.5).filter(lambda v: abs(v) > 1e-3),
    st.floats(-1.5, 1.5),
    st.sampled_from([0.2, 0.35, 0.5, 0.8]),
)
def test_round_trip_property(c1, c2, nu):
    tail = gs.GenSeries((nu,), {(0, (1,)): c1, (1, (1,)): c2, (-1, (2,)): 0.3 * c2})
    err = gs.round_trip_error(tail, 3.0, 8)
    scale = max(1.0, abs(c1), abs(c2)) ** (3.0 / nu + 1)
    assert err <= 1e-12 * scale


@pytest.mark.parametrize(
    "tail",
    [
        gs.GenSeries((NU,), {(0, (1,)): -T}),
        gs.GenSeries((NU,), {(1, (1,)): T}),
        gs.GenSeries((NU,), {(1, (1,)): T, (-1, (1,)): -T}),
    ],
)
def test_round_trip_examples(tail):
    assert gs.round_trip_error(tail, 1.6, 12) <= 1e-12
    # deeper truncation: log coefficients grow, so measure rounding against their size
    scale = max(1.0, max(abs(c) for c in gs.log_expand(tail, 6.0, 12).as_series().terms.values()))
    assert gs.round_trip_error(tail, 6.0, 12) <= 1e-14 * scale


def test_round_trip_sees_rounding_residue():
    # without the cancellation drop the residue is measured, not zeroed
    tail = gs.GenSeries((NU,), {(0, (1,)): -0.7, (1, (1,)): 1.3, (-1, (2,)): 0.4})
    assert 0.0 < gs.round_trip_error(tail, 3.0, 8) < 1e-13


def test_round_trip_detects_corruption(monkeypatch):
    tail = gs.GenSeries((NU,), {(1, (1,)): T})
    real_exp = gs.exp_expand

    def bad_exp(series, ximax, lmax, drop=True):
        out = real_exp(series, ximax, lmax, drop)
        key = next(iter(out.terms))
        out.terms[key] *= 1 + 1e-9
        return out

    monkeypatch.setattr(gs, "exp_expand", bad_exp)
    assert gs.round_trip_error(tail, 3.0, 8) > 1e-10


def test_exp_of_log_is_identity_on_simple_series():
    tail = gs.GenSeries((0.5,), {(0, (1,)): 0.4})
    back = gs.exp_expand(gs.log_expand(tail, 5.0, 4).as_series(), 5.0, 4)
    assert _terms(back) == pytest.approx({(0, (1,)): 0.4})


@pytest.mark.parametrize("theta", [0.0, 0.4, 1.2, 2.5])
def test_poly_p0_single_angle(theta):
    c, s = math.cos(theta), math.sin(theta)
    p0 = gs.poly_p0([[c]], [[s]])
    assert p0[0] == pytest.approx(GAMMA_TILDE * c - s, abs=1e-15)
    assert p0[1] == pytest.approx(-c, abs=1e-15)


def test_poly_p0_friedrichs_forms():
    assert np.allclose(gs.poly_p0([[0.0]], [[1.0]]), [-1.0])
    for q0 in (1, 2, 3):
        p0 = gs.poly_p0(np.zeros((q0, q0)), np.eye(q0))
        assert gs.poly_degree(p0) == 0 and p0[0] == pytest.approx((-1) ** q0)


def test_beta_examples():
    assert np.allclose(gs.beta_coeffs([0, 0, 1], 6), [2, 0, 0, 0, 0, 0])
    assert np.allclose(gs.beta_coeffs([3.0], 5), 0)
    theta = 0.4
    kappa = GAMMA_TILDE - math.tan(theta)
    beta = gs.beta_coeffs(gs.poly_p0([[math.cos(theta)]], [[math.sin(theta)]]), 10)
    assert np.allclose(beta, [kappa ** (k - 1) for k in range(1, 11)], rtol=1e-13)


@given(st.lists(st.floats(-3, 3), min_size=2, max_size=5).filter(lambda c: abs(c[-1]) > 0.1))
def test_beta_recurrence_consistency(coeffs):
    p = np.array(coeffs, dtype=complex)
    d = len(p) - 1
    K = 8
    beta = gs.beta_coeffs(p, K)
    assert beta[0] == pytest.approx(d)
    # p(z) * sum beta_k z^-k - p'(z): z-powers d-1 down to d-K must vanish
    prod = {}
    for i, pi in enumerate(p):
        for k in range(1, K + 1):
            prod[i - k] = prod.get(i - k, 0) + pi * beta[k - 1]
    deriv = {i - 1: i * pi for i, pi in enumerate(p) if i > 0}
    scale = max(1.0, np.max(np.abs(beta))) * max(np.abs(p))
    for power in range(d - 1, d - K - 1, -1):
        if power < d - K + 1:
            break
        assert abs(prod.get(power, 0) - deriv.get(power, 0)) <= 1e-9 * scale


def test_split_beta_identity():
    rng = np.random.default_rng(7)
    for _ in range(10):
        q0 = int(rng.integers(1, 4))
        th = rng.uniform(0, math.pi, q0)
        th = th[np.abs(th - math.pi / 2) > 0.05]
        # a pi/2 component contributes nothing
        full = np.append(th, math.pi / 2) if rng.random() < 0.5 else th
        if full.size == 0:
            continue
        a0, b0 = angle_block(full)
        beta = gs.beta_coeffs(gs.poly_p0(a0, b0), 10)
        kap = GAMMA_TILDE - np.tan(th)
        ref = [np.sum(kap ** (k - 1)) for k in range(1, 11)]
        assert np.allclose(beta, ref, rtol=1e-12, atol=1e-12 * max(1, np.max(np.abs(kap), initial=0)) ** 10)


def test_poly_p1_examples():
    spec = SpectralSpec(0, (NU,), 1.0)
    alpha, beta = 1.5, 0.8
    res = gs.poly_p1([[alpha]], [[beta]], spec)
    r = T * beta / alpha
    for k in range(1, 10):
        assert res.table.coeff(0, NU * k) == pytest.approx(-(r**k) / k, rel=1e-13)
    res = gs.poly_p1([[2.0]], [[0.0]], spec)
    assert _terms(res.p1) == {(0, (0,)): 2.0} and not res.table.entries
    spec2 = SpectralSpec(0, (0.3, 0.6), 1.0)
    res = gs.poly_p1(np.zeros((2, 2)), np.eye(2), spec2)
    assert len(res.p1) == 1 and not res.table.entries
    assert res.alpha0.value == pytest.approx(0.9)
    assert list(res.p1.terms.values())[0] == pytest.approx(tau(0.3) * tau(0.6))


def test_scaling_invariance_of_tail():
    rng = np.random.default_rng(11)
    spec = random_spec(rng, 1, 2)
    a, b = random_lagrangian(rng, 1, 2)
    m = rng.normal(size=(3, 3)) + 2 * np.eye(3)
    t1 = gs.normalize_leading(gs.det_p(a, b, spec))[3]
    t2 = gs.normalize_leading(gs.det_p(m @ a, m @ b, spec))[3]
    assert set(t1.terms) == set(t2.terms)
    for k in t1.terms:
        assert t1.terms[k] == pytest.approx(t2.terms[k], rel=1e-10, abs=1e-12)
