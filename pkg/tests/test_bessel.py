import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cone_zeta import bessel as bs
from cone_zeta import kernels

# reference values from mpmath at 30 digits
J_REF = {
    0.0: {0.5: 0.9384698072408129, 5: -0.1775967713143383, 11.9: 0.025049441699589645,
          12.1: 0.069666773606807312, 15: -0.014224472826780773, 19.9: 0.17287775639261846,
          20.1: 0.15953606793729709, 35: -0.12684568275631257},
    0.3: {0.5: 0.70026048850705466, 5: -0.29682911012576076, 11.9: -0.081220674389241637,
          12.1: -0.036262204172314099, 15: 0.080045072038934185, 19.9: 0.17490537507326935,
          20.1: 0.17794129598472678, 35: -0.092356547911872288},
    -0.3: {0.5: 1.0653269537191771, 5: -0.015049409319569651, 11.9: 0.12740910606091065,
           12.1: 0.16187002727268451, 15: -0.10649162798247486, 19.9: 0.13299751661571142,
           20.1: 0.10605508940200533, 35: -0.13379296003528439},
    0.7: {0.5: 0.40187397483741253, 5: -0.35763991666007156, 11.9: -0.1909348655181183,
          12.1: -0.15984748022680059, 15: 0.17495671761343902, 19.9: 0.12092596171557045,
          20.1: 0.14397643146980078, 35: -0.017718083899166818},
    -0.7: {0.5: 0.70274760349337507, 5: 0.20935673823865441, 11.9: 0.21797889100514249,
           12.1: 0.22714862711079896, 15: -0.1909194645014563, 19.9: 0.035569206512750907,
           20.1: 4.0917146578747747e-5, 35: -0.097755063905318833},
}
Y0_REF = {0.5: -0.44451873350670656, 5: -0.30851762524903378, 12.1: -0.21843838055092549,
          20.1: 0.078810592428750293, 35: 0.045797987195155641}
I_REF = {
    0.0: {0.5: 1.0634833707413235, 5: 27.239871823604447, 19.9: 39513376.520066824,
          20.1: 48017874.107136503, 50: 2.9325537838493363e20},
    0.3: {0.5: 0.77095173457921946, 5: 26.962093779437943, 19.9: 39421754.662733975,
          20.1: 47907669.084623779, 50: 2.9298887214511478e20},
    -0.3: {0.5: 1.2738712714514324, 5: 26.964010573921825, 19.9: 39421754.662733975,
           20.1: 47907669.08462378, 50: 2.9298887214511478e20},
}
K0_REF = {0.5: 0.92441907122766586, 1.9: 0.12884597927604749, 2.1: 0.10078374088996693,
          10: 1.7780062316167652e-5, 19.9: 6.3607809496423133e-10, 20.1: 5.1821017487977158e-10,
          50: 3.4101677497894955e-23}
TAU_REF = {0.25: 1.0460496200531016, 0.3: 1.0479608751150151, 0.5: 1.0, 0.7: 0.80155664199563643}
EXPINT_REF = {(1, 2.0): 0.04890051070806112, (1, 0.5): 0.55977359477616081, (2, 1.0): 0.14849550677592205,
              (3, 0.1): 0.41629145790827876, (5, 7.0): 7.8470166623256785e-5}


@pytest.mark.parametrize("v", sorted(J_REF))
def test_bessel_j_reference(v):
    for z, ref in J_REF[v].items():
        got = bs.bessel_j(v, z)
        assert abs(got.value - ref) <= 1e-12, (v, z)


def test_bessel_y0_reference():
    for z, ref in Y0_REF.items():
        assert bs.bessel_y0(z).value == pytest.approx(ref, abs=2e-14, rel=1e-12)


@pytest.mark.parametrize("v", sorted(I_REF))
def test_bessel_i_reference(v):
    for z, ref in I_REF[v].items():
        assert bs.bessel_i(v, z).value == pytest.approx(ref, rel=1e-12)


def test_bessel_k0_reference():
    for z, ref in K0_REF.items():
        assert bs.bessel_k0(z).value == pytest.approx(ref, rel=1e-12)


def test_tau_reference_and_stirling_route():
    for v, ref in TAU_REF.items():
        assert bs.tau(v) == pytest.approx(ref, rel=1e-13)
        assert bs.tau(v, "stirling") == pytest.approx(bs.tau(v), rel=1e-12)


def test_tau_half_is_one():
    assert bs.tau(0.5) == pytest.approx(1.0, abs=1e-15)


@given(st.floats(0.01, 0.99))
def test_tau_reflection_form(v):
    assert bs.tau(v) == pytest.approx(4.0**v * v * bs.gamma(v) / bs.gamma(1 - v), rel=1e-12)


def test_expint_reference():
    for (k, z), ref in EXPINT_REF.items():
        assert bs.expint_k(k, z) == pytest.approx(ref, rel=1e-13)


def test_expint_recurrence():
    z = 1.0
    for k in range(1, 6):
        lhs = k * bs.expint_k(k + 1, z)
        rhs = math.exp(-z) - z * bs.expint_k(k, z)
        assert abs(lhs - rhs) < 1e-10


def test_expint_decays():
    vals = [bs.expint_k(2, z) for z in (1, 5, 20, 100)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] < math.exp(-100)


def test_j_half_closed_form():
    assert abs(bs.bessel_j(0.5, math.pi).value) < 1e-12
    for z in (0.3, 3.0, 30.0):
        assert bs.bessel_j(0.5, z).value == pytest.approx(math.sqrt(2 / (math.pi * z)) * math.sin(z), abs=1e-14)
        assert bs.bessel_j(-0.5, z).value == pytest.approx(math.sqrt(2 / (math.pi * z)) * math.cos(z), abs=1e-14)


def test_i_half_closed_form():
    assert bs.bessel_i(0.5, 1.0).value == pytest.approx(0.937674, abs=1e-6)
    for z in (0.3, 3.0, 30.0):
        ref = math.sqrt(2 / (math.pi * z)) * math.sinh(z)
        assert bs.bessel_i(0.5, z).value == pytest.approx(ref, rel=1e-13)


def test_half_integer_generic_routes_agree():
    for z in (0.5, 5.0, 11.0):
        closed = bs.bessel_j(0.5, z)
        series = bs.bessel_j(0.5, z, route="series")
        assert closed.method == "closed-half-integer"
        assert abs(closed.value - series.value) < 1e-10
    for z in (25.0, 40.0):
        assert abs(bs.bessel_j(0.5, z).value - bs.bessel_j(0.5, z, route="asymptotic").value) < 1e-10


def test_small_argument_limits():
    assert bs.bessel_j(0.0, 1e-8).value == pytest.approx(1.0, abs=1e-15)
    for v in (0.3, -0.3, 0.7):
        z = 1e-6
        assert bs.bessel_j(v, z).value * z**-v == pytest.approx(1 / (2**v * bs.gamma(1 + v)), rel=1e-10)


def test_jtilde0_routes_and_limits():
    a = bs.jtilde0(1.0, 1.0, route="y0")
    b = bs.jtilde0(1.0, 1.0, route="series")
    assert abs(a.value - b.value) < 1e-10
    for r in (0.5, 2.0, 3.0):
        assert bs.jtilde0(1e-9, r).value == pytest.approx(math.log(r), abs=1e-12)
    for mu in (0.3, 2.0, 7.0):
        assert bs.jtilde0(mu, 1.3, route="series").value == bs.jtilde0(-mu, 1.3, route="series").value


def test_large_i_is_log_scaled():
    r = bs.bessel_i(0.3, 800.0)
    assert r.log_scaled
    ref = 800.0 - 0.5 * math.log(2 * math.pi * 800.0)
    assert r.value == pytest.approx(ref, abs=1e-3)


def test_i_asymptotic_ratio():
    for z in (100.0, 400.0):
        ratio = bs.bessel_i(0.3, z).value / (math.exp(z) / math.sqrt(2 * math.pi * z))
        assert abs(ratio - 1) < 1.0 / z


def test_k0_decay():
    vals = [bs.bessel_k0(x).value * math.exp(x) * math.sqrt(x) for x in (10, 50, 200, 600)]
    assert all(abs(v - math.sqrt(math.pi / 2)) < 0.02 for v in vals)


def test_wronskian_j0_y0():
    for z in (0.5, 1.0, 5.0):
        h = 1e-5 * z

        def d(f):
            return (f(z + h) - f(z - h)) / (2 * h)

        j = bs.bessel_j(0.0, z).value
        y = bs.bessel_y0(z).value
        jp = d(lambda t: bs.bessel_j(0.0, t).value)
        yp = d(lambda t: bs.bessel_y0(t).value)
        assert abs(j * yp - jp * y - 2 / (math.pi * z)) < 1e-10


@pytest.mark.parametrize("v", [0.0, 0.3, -0.3, 0.7, -0.7])
def test_route_overlap_around_switch(v):
    for z in np.linspace(11.0, 13.0, 9):
        a = bs.bessel_j(v, z, route="series").value
        b = bs.bessel_j(v, z, route="recurrence").value
        assert abs(a - b) < 1e-9
    for z in np.linspace(19.0, 21.0, 9):
        a = bs.bessel_j(v, z, route="recurrence").value
        b = bs.bessel_j(v, z, route="asymptotic").value
        assert abs(a - b) < 1e-9


def test_y0_route_overlap():
    for z in np.linspace(11.0, 13.0, 5):
        assert abs(bs.bessel_y0(z, "series").value - bs.bessel_y0(z, "recurrence").value) < 1e-9
    for z in np.linspace(19.0, 21.0, 5):
        assert abs(bs.bessel_y0(z, "recurrence").value - bs.bessel_y0(z, "asymptotic").value) < 1e-9


def test_i_k_route_overlap():
    for z in np.linspace(19.0, 21.0, 5):
        a = bs.bessel_i(0.3, z, "series").value
        b = bs.bessel_i(0.3, z, "asymptotic").value
        assert abs(a - b) / a < 1e-9
        a = bs.bessel_k0(z, "quadrature").value
        b = bs.bessel_k0(z, "asymptotic").value
        assert abs(a - b) / a < 1e-9
    for z in np.linspace(1.5, 2.5, 5):
        a = bs.bessel_k0(z, "series").value
        b = bs.bessel_k0(z, "quadrature").value
        assert abs(a - b) / a < 1e-9


def test_error_estimates_small():
    for v in (0.0, 0.3, -0.7):
        for z in (0.5, 5.0, 15.0, 30.0):
            assert bs.bessel_j(v, z).est_error <= 1e-12


def test_invalid_inputs():
    with pytest.raises(ValueError):
        bs.bessel_j(1.2, 1.0)
    with pytest.raises(ValueError):
        bs.bessel_j(0.3, 0.0)
    with pytest.raises(ValueError):
        bs.tau(1.0)
    with pytest.raises(ValueError):
        bs.expint_k(0, 1.0)
    with pytest.raises(ValueError):
        bs.bessel_j(0.3, 1.0, route="bogus")


def test_backend_name():
    assert kernels.BACKEND in ("compiled", "python")
