"""Acceptance criteria, one test each.  Every test prints a PASS/FAIL line."""

import io
import json
import math
import time
from contextlib import redirect_stdout

import numpy as np
import pytest

from cone_zeta import genseries as gs
from cone_zeta.bessel import GAMMA_TILDE, tau
from cone_zeta.cli import BUILTINS, main
from cone_zeta.model import (
    ModelProblem,
    asymptotic_residual,
    find_eigenvalues,
    resolvent_trace_exact,
    resolvent_trace_via_F,
    verify_logint,
)
from cone_zeta.singularity import zeta_structure
from cone_zeta.symplectic import SpectralSpec, angle_block

from conftest import random_lagrangian, random_spec


@pytest.fixture
def announce(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail

    return emit


def _structure_json(config):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(["structure", "--config", config, "--format", "json"])
    assert code == 0
    return json.loads(buf.getvalue())


def test_criterion_1_fmp_residues(announce):
    t0 = time.perf_counter()
    rep = _structure_json("builtin:fmp")
    elapsed = time.perf_counter() - t0
    poles = {round(-p["location"], 9): p for p in rep["poles"]}
    worst = 0.0
    flags_ok = True
    for k in range(1, 6):
        p = poles.get(round(k / 2, 9))
        if p is None or p["order"] != 1:
            worst = math.inf
            continue
        if k % 2 == 0:
            flags_ok &= p["integer_flag"] and p["combined_residue"] == [None, None]
        else:
            ref = -0.5 * math.sin(0.5 * math.pi * k) / math.pi
            worst = max(worst, abs(p["combined_residue"][0] - ref), abs(p["combined_residue"][1]))
    ok = worst <= 1e-12 and flags_ok and elapsed < 1.0
    announce(1, ok, f"max residue error {worst:.2e}, integer flags {flags_ok}, runtime {elapsed:.3f}s")


def test_criterion_2_arbitrary_order_poles(announce):
    nu, t = 0.3, tau(0.3)
    cfg = BUILTINS["count3k"].config()
    rep = zeta_structure(cfg.A, cfg.B, cfg.spec, ximax=cfg.opt("ximax"), lmax=cfg.opt("lmax"))
    poles = {round(-p.location, 9): p for p in rep.poles}
    logs = {round(-g.location, 9): g for g in rep.logs}
    worst, shape_ok = 0.0, True
    for k in range(1, 5):
        xi = round(nu * k, 9)
        p, g = poles.get(xi), logs.get(xi)
        if p is None or g is None:
            shape_ok = False
            continue
        shape_ok &= p.order == k + 1 and g.ell == (1 if k % 2 else 2)
        lead = (-1) ** k * t**k * math.factorial(k) * nu / 2.0**k
        m = k // 2
        glead = 2.0 * nu * (-1) ** (m + 1) * t**k * math.comb(k, m + 1) * (1 if k % 2 else 2)
        worst = max(worst, abs(p.leading - lead) / abs(lead), abs(g.leading - glead) / abs(glead))
    ok = shape_ok and worst <= 1e-10
    announce(2, ok, f"orders/ell shapes {shape_ok}, max relative error {worst:.2e}")


def test_criterion_3_resolvent_identity(announce):
    t0 = time.perf_counter()
    sine = ModelProblem.build([[0.0]], [[1.0]], SpectralSpec(0, (0.5,), 1.0))
    sine_err = 0.0
    for x in (1.0, 2.0, 5.0, 10.0):
        closed = 1.0 / (2 * x * math.tanh(x)) - 1.0 / (2 * x * x)
        sine_err = max(sine_err, abs(resolvent_trace_via_F(sine, x) - closed))
    countk = ModelProblem.build([[0, 1], [-1, 0]], np.eye(2), SpectralSpec(1, (0.3,), 1.0))
    spec = find_eigenvalues(countk, 300.0)
    mixed_ok, details = True, []
    for x in (5.0, 10.0):
        value, bound = resolvent_trace_exact(spec, x)
        diff = abs(resolvent_trace_via_F(countk, x) - value)
        mixed_ok &= diff < bound + 1e-6
        details.append(f"x={x:g}: {diff:.1e} < {bound + 1e-6:.1e}")
    elapsed = time.perf_counter() - t0
    ok = sine_err < 1e-7 and mixed_ok and elapsed < 30.0
    announce(3, ok, f"sine max error {sine_err:.2e}; countk {'; '.join(details)}; runtime {elapsed:.2f}s")


def test_criterion_4_closed_form_spectra(announce):
    worst = 0.0
    for a, b, shift in ((0.0, 1.0, 0.0), (1.0, 0.0, 0.5)):
        p = ModelProblem.build([[a]], [[b]], SpectralSpec(0, (0.5,), 1.0))
        mus = find_eigenvalues(p, 100.0).expanded_mus()[:30]
        ref = np.pi * (np.arange(1, 31) - shift)
        worst = max(worst, np.max(np.abs(mus - ref)) if len(mus) == 30 else math.inf)
    announce(4, worst <= 1e-10, f"max |mu_j - closed form| over j <= 30: {worst:.2e}")


def test_criterion_5_split_beta_identity(announce):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for i in range(20):
        q0 = int(rng.integers(1, 4))
        th = rng.uniform(0.0, math.pi, q0)
        th = np.where(np.abs(th - math.pi / 2) < 0.2, th - 0.4, th)
        full = np.append(th, math.pi / 2) if i % 4 == 0 else th
        a0, b0 = angle_block(full)
        beta = gs.beta_coeffs(gs.poly_p0(a0, b0), 10)
        kap = GAMMA_TILDE - np.tan(th)
        ref = np.array([np.sum(kap ** (k - 1)) for k in range(1, 11)])
        worst = max(worst, float(np.max(np.abs(beta - ref) / np.maximum(1.0, np.abs(ref)))))
    announce(5, worst <= 1e-12, f"20 angle tuples, max relative error {worst:.2e}")


def test_criterion_6_determinant_oracle(announce):
    rng = np.random.default_rng(99)
    worst = 0.0
    for i in range(100):
        q = int(rng.integers(1, 5))
        q0 = int(rng.integers(0, q + 1))
        spec = random_spec(rng, q0, q - q0)
        a, b = random_lagrangian(rng, q0, q - q0, complex_=bool(i % 3 == 0))
        p = gs.det_p(a, b, spec)
        x, y = rng.uniform(0.1, 2.0), rng.uniform(0.1, 1.0)
        num = gs.substituted_det(a, b, spec, x, y)
        worst = max(worst, abs(p.evaluate(x, y) - num) / max(1.0, abs(num)))
    announce(6, worst <= 1e-10, f"100 random Lagrangians, q <= 4, max relative error {worst:.2e}")


def test_criterion_7_round_trip(announce):
    errs = []
    for name in ("fmp", "countk", "count3k"):
        cfg = BUILTINS[name].config()
        _, _, _, tail = gs.normalize_leading(gs.det_p(cfg.A, cfg.B, cfg.spec))
        errs.append(gs.round_trip_error(tail, cfg.opt("ximax"), cfg.opt("lmax")))
    announce(7, max(errs) <= 1e-12, "round-trip errors " + ", ".join(f"{e:.1e}" for e in errs))


def test_criterion_8_logint(announce):
    diffs = [verify_logint(*args)[2] for args in ((0.0, 1.0, 1, math.e), (0.0, 1.0, 2, math.e),
                                                   (0.5, 0.7, 1, math.e**2))]
    announce(8, max(diffs) < 1e-8, "diffs " + ", ".join(f"{d:.1e}" for d in diffs))


def test_criterion_9_asymptotics(announce):
    a0, b0 = angle_block([math.pi / 4])
    cases = {
        "fmp nu=0.3": (ModelProblem.build([[1.0]], [[1.0]], SpectralSpec(0, (0.3,), 1.0)), 3.0),
        "q0=1 theta=pi/4": (ModelProblem.build(a0, b0, SpectralSpec(1, (), 1.0)), gs.DEFAULT_XIMAX),
    }
    ok, details = True, []
    for name, (p, ximax) in cases.items():
        t = asymptotic_residual(p, [100.0, 200.0, 400.0], ximax=ximax)
        r = np.abs(t.residual)
        below = r[1] < 10 * abs(t.predicted[1])
        decreasing = r[0] > r[1] > r[2]
        ok &= bool(below and decreasing)
        details.append(f"{name}: |r(200)| {r[1]:.2e} vs 10|pred| {10 * abs(t.predicted[1]):.2e}, "
                       f"decreasing {decreasing}")
    announce(9, ok, "; ".join(details))


def test_criterion_10_friedrichs_emptiness(announce):
    fr = _structure_json("builtin:fmp-friedrichs")
    sp = _structure_json("builtin:split-theta")
    ok = fr["is_empty"] and sp["is_empty"]
    announce(10, ok, f"alpha=0 empty {fr['is_empty']}, theta=pi/2 empty {sp['is_empty']}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
