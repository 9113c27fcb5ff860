"""Command line front end: ``cone-zeta validate|structure|eigs|verify|examples``.

Problems are JSON documents::

    {"q0": 1, "nus": [0.3], "R": 1.0,
     "A": [[[0, 0], [1, 0]], [[-1, 0], [0, 0]]],
     "B": [[1, 0], [0, 1]],
     "options": {"ximax": 6.0, "lmax": 12}}

Matrix entries are [re, im] pairs or plain reals.  ``--config builtin:NAME``
loads one of the shipped examples instead of a file.

Exit codes: 0 ok, 1 computation or verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import genseries as gs
from . import model as md
from .bessel import GAMMA_TILDE, tau
from .singularity import SingularityReport, heat_structure, zeta_structure
from .symplectic import (
    InvalidLagrangianError,
    SpectralSpec,
    decompose,
    split_angles,
    validate_lagrangian,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

DEFAULT_OPTIONS: dict = {
    "ximax": gs.DEFAULT_XIMAX,
    "lmax": gs.DEFAULT_LMAX,
    "mu_max": 100.0,
    "K": 24,
    "x_values": [1.0, 2.0, 5.0, 10.0],
    "residual_x": [20.0, 40.0, 80.0],
    "resolvent_tol": 1e-6,
    "residual_tol": 1e-7,
    "logint_tol": 1e-8,
    "roundtrip_tol": 1e-12,
    "det_tol": 1e-10,
    "example_tol": 1e-10,
    "tau_scale": 1.0,
    "out": None,
}

STRUCTURE_COLUMNS = [
    "location", "kind", "order_or_ell", "leading_re", "leading_im", "residue_re", "residue_im", "flags",
]
EIG_COLUMNS = ["mu", "mu_squared", "multiplicity"]


class ConfigError(ValueError):
    """Malformed problem definition; the message names the offending field."""


def _num(x: float) -> str:
    return "%.17e" % x


# ---------------------------------------------------------------------------
# configuration


def _parse_entry(v, path: str) -> complex:
    if isinstance(v, bool):
        raise ConfigError(f"{path}: expected a number or [re, im], got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(
        isinstance(t, (int, float)) and not isinstance(t, bool) for t in v
    ):
        return complex(v[0], v[1])
    raise ConfigError(f"{path}: expected a number or [re, im], got {v!r}")


def _parse_matrix(m, q: int, name: str) -> np.ndarray:
    if not isinstance(m, list) or len(m) != q:
        raise ConfigError(f"{name}: expected {q} rows")
    out = np.zeros((q, q), dtype=complex)
    for i, row in enumerate(m):
        if not isinstance(row, list) or len(row) != q:
            raise ConfigError(f"{name}[{i}]: expected {q} entries")
        for j, v in enumerate(row):
            out[i, j] = _parse_entry(v, f"{name}[{i}][{j}]")
    return out


@dataclass
class ProblemConfig:
    q0: int
    nus: tuple[float, ...]
    R: float
    A: np.ndarray
    B: np.ndarray
    options: dict = field(default_factory=dict)
    name: str | None = None

    @property
    def spec(self) -> SpectralSpec:
        return SpectralSpec(self.q0, self.nus, self.R)

    def opt(self, key: str):
        return self.options.get(key, DEFAULT_OPTIONS[key])

    @classmethod
    def from_dict(cls, d, name: str | None = None) -> "ProblemConfig":
        if not isinstance(d, dict):
            raise ConfigError("<root>: expected a JSON object")
        unknown = set(d) - {"q0", "nus", "R", "A", "B", "options", "name"}
        if unknown:
            raise ConfigError(f"<root>: unknown field(s) {sorted(unknown)}")
        for key in ("q0", "nus", "A", "B"):
            if key not in d:
                raise ConfigError(f"{key}: missing")
        q0 = d["q0"]
        if not isinstance(q0, int) or isinstance(q0, bool) or q0 < 0:
            raise ConfigError("q0: expected a non-negative integer")
        nus = d["nus"]
        if not isinstance(nus, list):
            raise ConfigError("nus: expected a list")
        for i, v in enumerate(nus):
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not 0 < v < 1:
                raise ConfigError(f"nus[{i}]: expected a real in (0, 1), got {v!r}")
        R = d.get("R", 1.0)
        if not isinstance(R, (int, float)) or isinstance(R, bool) or not R > 0:
            raise ConfigError("R: expected a positive real")
        q = q0 + len(nus)
        if q == 0:
            raise ConfigError("q0, nus: the problem has dimension zero")
        A = _parse_matrix(d["A"], q, "A")
        B = _parse_matrix(d["B"], q, "B")
        opts = d.get("options", {}) or {}
        if not isinstance(opts, dict):
            raise ConfigError("options: expected an object")
        for k in opts:
            if k not in DEFAULT_OPTIONS:
                raise ConfigError(f"options.{k}: unknown option")
        return cls(q0, tuple(float(v) for v in nus), float(R), A, B, dict(opts), d.get("name", name))

    def to_dict(self) -> dict:
        def mat(m):
            return [[[float(z.real), float(z.imag)] for z in row] for row in m]

        d = {"q0": self.q0, "nus": list(self.nus), "R": self.R, "A": mat(self.A), "B": mat(self.B),
             "options": dict(self.options)}
        if self.name is not None:
            d["name"] = self.name
        return d


def parse_config_text(text: str, name: str | None = None) -> ProblemConfig:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return ProblemConfig.from_dict(d, name)


def load_config(path: str) -> ProblemConfig:
    if path.startswith("builtin:"):
        key = path[len("builtin:"):]
        if key not in BUILTINS:
            raise ConfigError(f"unknown built-in {key!r}; choose from {sorted(BUILTINS)}")
        return BUILTINS[key].config()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return parse_config_text(text, name=path)


# ---------------------------------------------------------------------------
# built-in examples and their closed-form ledgers


@dataclass(frozen=True)
class LedgerRow:
    kind: str          # "pole", "log" or "log0"
    location: float
    order: int
    leading: complex
    residue: complex | None = None
    flags: str = ""


def report_rows(report: SingularityReport) -> list[LedgerRow]:
    rows = [LedgerRow("log0", 0.0, 0, complex(report.log_at_zero_coeff))]
    for p in report.poles:
        flags = "integer_xi" if p.integer_flag else ""
        rows.append(LedgerRow("pole", p.location, p.order, p.leading, p.combined_residue, flags))
    for g in report.logs:
        rows.append(LedgerRow("log", g.location, g.ell, g.leading))
    return rows


@dataclass(frozen=True)
class Builtin:
    name: str
    description: str
    make: Callable[[], dict]
    expected: Callable[[ProblemConfig], list[LedgerRow]]
    notes: str = ""

    def config(self) -> ProblemConfig:
        return ProblemConfig.from_dict(self.make(), self.name)


def _ks(nu: float, ximax: float) -> range:
    return range(1, int(math.floor(ximax / nu + 1e-9)) + 1)


def _exp_fmp(cfg: ProblemConfig) -> list[LedgerRow]:
    nu = cfg.nus[0]
    a, b = cfg.A[0, 0], cfg.B[0, 0]
    rows = [LedgerRow("log0", 0.0, 0, 0j)]
    if a == 0:
        return rows
    t = tau(nu) * b / a
    for k in _ks(nu, cfg.opt("ximax")):
        xi = nu * k
        integer = abs(xi - round(xi)) < 1e-9
        lead = nu * t**k
        res = None if integer else -nu * math.sin(math.pi * xi) / math.pi * t**k
        rows.append(LedgerRow("pole", -xi, 1, lead, res, "integer_xi" if integer else ""))
    return rows


def _exp_log0(value: int) -> Callable[[ProblemConfig], list[LedgerRow]]:
    return lambda cfg: [LedgerRow("log0", 0.0, 0, complex(value))]


def _exp_countk(cfg: ProblemConfig) -> list[LedgerRow]:
    nu, t = cfg.nus[0], tau(cfg.nus[0])
    rows = [LedgerRow("log0", 0.0, 0, -1 + 0j)]
    for k in _ks(nu, cfg.opt("ximax")):
        if k > cfg.opt("lmax"):
            break
        rows.append(LedgerRow("log", -nu * k, k, (-1) ** k * t**k * 2.0**k * nu / math.factorial(k - 1)))
    return rows


def _exp_arb(cfg: ProblemConfig) -> list[LedgerRow]:
    nu, t = cfg.nus[0], tau(cfg.nus[0])
    rows = [LedgerRow("log0", 0.0, 0, 0j)]
    for k in _ks(nu, cfg.opt("ximax")):
        rows.append(LedgerRow("pole", -nu * k, k + 1, (-1) ** k * t**k * math.factorial(k) * nu / 2.0**k,
                              None, "integer_xi" if abs(nu * k - round(nu * k)) < 1e-9 else ""))
    return rows


def _exp_count3k(cfg: ProblemConfig) -> list[LedgerRow]:
    rows = _exp_arb(cfg)
    rows[0] = LedgerRow("log0", 0.0, 0, -1 + 0j)
    nu, t = cfg.nus[0], tau(cfg.nus[0])
    for k in _ks(nu, cfg.opt("ximax")):
        m = k // 2
        ell = 1 if k % 2 else 2
        lead = 2.0 * nu * (-1) ** (m + 1) * t**k * math.comb(k, m + 1) * (1 if k % 2 else 2)
        rows.append(LedgerRow("log", -nu * k, ell, lead))
    return rows


def _mat(m) -> list:
    return [[float(v) for v in row] for row in m]


BUILTINS: dict[str, Builtin] = {}


def _register(b: Builtin) -> None:
    BUILTINS[b.name] = b


_register(Builtin(
    "fmp", "q0=0, nu=1/2, boundary alpha c- = beta c+ with alpha=beta=1",
    lambda: {"q0": 0, "nus": [0.5], "R": 1.0, "A": [[1.0]], "B": [[1.0]], "options": {"ximax": 3.0}},
    _exp_fmp, "simple poles at -nu k with residue -nu sin(pi nu k)/pi (tau beta/alpha)^k",
))
_register(Builtin(
    "fmp-friedrichs", "FMP family with alpha=0 (Friedrichs extension)",
    lambda: {"q0": 0, "nus": [0.5], "R": 1.0, "A": [[0.0]], "B": [[1.0]], "options": {"ximax": 3.0}},
    _exp_log0(0), "empty singular ledger",
))
_register(Builtin(
    "lap-r2", "single -1/4 eigenvalue, theta = 0",
    lambda: {"q0": 1, "nus": [], "R": 1.0, "A": [[1.0]], "B": [[0.0]]},
    _exp_log0(-1), "only the log s term, coefficient -1, with f(s) = exp(-2 s kappa)",
))
_register(Builtin(
    "countk", "q0=1, q1=1, A=[[0,1],[-1,0]], B=Id",
    lambda: {"q0": 1, "nus": [0.3], "R": 1.0, "A": [[0, 1], [-1, 0]], "B": [[1, 0], [0, 1]],
             "options": {"ximax": 1.6}},
    _exp_countk, "log singularities at -nu k with ell = k; no poles",
))
_register(Builtin(
    "arb-order", "q0=1, q1=1, A=[[-1,1],[0,0]], B=[[0,0],[1,-1]]",
    lambda: {"q0": 1, "nus": [0.3], "R": 1.0, "A": [[-1, 1], [0, 0]], "B": [[0, 0], [1, -1]],
             "options": {"ximax": 1.6}},
    _exp_arb, "poles of order k+1 at -nu k; no logs",
))
_register(Builtin(
    "count3k", "q0=2, q1=1, A=[[0,1,-1],[1,0,0],[1,0,0]], B=Id",
    lambda: {"q0": 2, "nus": [0.3], "R": 1.0, "A": [[0, 1, -1], [1, 0, 0], [1, 0, 0]],
             "B": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "options": {"ximax": 1.6}},
    _exp_count3k, "poles of order k+1 and logs with ell = 1 (k odd) or 2 (k even) at -nu k",
))
_register(Builtin(
    "split-theta", "single -1/4 eigenvalue, theta = pi/2",
    lambda: {"q0": 1, "nus": [], "R": 1.0, "A": [[0.0]], "B": [[1.0]]},
    _exp_log0(0), "empty singular ledger",
))
_register(Builtin(
    "sine", "q0=0, nu=1/2, A=0, B=1: eigenvalues (j pi)^2",
    lambda: {"q0": 0, "nus": [0.5], "R": 1.0, "A": [[0.0]], "B": [[1.0]], "options": {"mu_max": 100.0}},
    _exp_log0(0), "empty singular ledger",
))
_register(Builtin(
    "cosine", "q0=0, nu=1/2, A=1, B=0: eigenvalues ((j - 1/2) pi)^2",
    lambda: {"q0": 0, "nus": [0.5], "R": 1.0, "A": [[1.0]], "B": [[0.0]], "options": {"mu_max": 100.0}},
    _exp_log0(0), "empty singular ledger",
))


# ---------------------------------------------------------------------------
# output helpers


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _cplx(z: complex | None) -> list:
    if z is None:
        return [None, None]
    return [float(z.real), float(z.imag)]


def _fmt_c(z: complex | None) -> str:
    if z is None:
        return "-"
    if z.imag == 0:
        return "%.12g" % z.real
    return "%.12g%+.12gj" % (z.real, z.imag)


def _structure_csv_rows(rows: list[LedgerRow]) -> list[list]:
    out = []
    for r in rows:
        res = (float("nan"), float("nan")) if r.residue is None else (r.residue.real, r.residue.imag)
        out.append([float(r.location), r.kind, r.order, float(r.leading.real), float(r.leading.imag),
                    float(res[0]), float(res[1]), r.flags])
    return out


def report_to_json(report: SingularityReport) -> dict:
    d = {
        "spec": {"q0": report.spec.q0, "nus": list(report.spec.nus), "R": report.spec.R},
        "j0": report.j0,
        "log_at_zero_coeff": report.log_at_zero_coeff,
        "poles": [
            {"location": p.location, "order": p.order, "leading": _cplx(p.leading),
             "combined_residue": _cplx(p.combined_residue), "integer_flag": p.integer_flag}
            for p in report.poles
        ],
        "logs": [{"location": g.location, "ell": g.ell, "leading": _cplx(g.leading)} for g in report.logs],
        "truncation": {"ximax": report.truncation[0], "lmax": report.truncation[1]},
        "unreliable": list(report.unreliable),
        "is_empty": report.is_empty,
        "decomposable_view": None,
        "split_view": None,
    }
    if report.decomposable_view is not None:
        v = report.decomposable_view
        d["decomposable_view"] = {
            "beta": [_cplx(complex(b)) for b in v.beta],
            "f_coeffs": [_cplx(complex(b)) for b in v.f_coeffs],
            "log_at_zero_coeff": v.log_at_zero_coeff,
            "c_xi": [[xi, _cplx(complex(c))] for xi, c in v.c_xi],
        }
    if report.split_view is not None:
        d["split_view"] = {"angles": list(report.split_view.angles), "kappas": list(report.split_view.kappas)}
    return d


def _structure_text(cfg: ProblemConfig, report: SingularityReport) -> str:
    lines = [f"problem: {cfg.name or '<config>'}  q0={cfg.q0} nus={list(cfg.nus)} R={cfg.R}"]
    lines.append(f"truncation: ximax={report.truncation[0]} lmax={report.truncation[1]}")
    lines.append(f"j0 = {report.j0};  log s coefficient (j0 - q0) = {report.log_at_zero_coeff}"
                 f"  [times sin(pi s)/pi exp(-2 s {GAMMA_TILDE:.12f})]")
    if report.is_empty:
        lines.append("singular ledger: empty (regular part only)")
    if report.poles:
        lines.append("poles:")
        lines.append("  %-14s %-6s %-26s %-26s %s" % ("location", "order", "leading f(-xi)", "combined residue", "flags"))
        for p in report.poles:
            lines.append("  %-14.10g %-6d %-26s %-26s %s" % (
                p.location, p.order, _fmt_c(p.leading), _fmt_c(p.combined_residue),
                "integer_xi" if p.integer_flag else ""))
    if report.logs:
        lines.append("logarithms:")
        lines.append("  %-14s %-6s %s" % ("location", "ell", "leading g"))
        for g in report.logs:
            lines.append("  %-14.10g %-6d %s" % (g.location, g.ell, _fmt_c(g.leading)))
    if report.unreliable:
        lines.append("unreliable (need larger lmax): " + ", ".join("%.6g" % x for x in report.unreliable))
    if report.decomposable_view is not None:
        v = report.decomposable_view
        lines.append("decomposable: f(s) = sum beta_k (-2s)^(k-1)/(k-1)!, beta_1..4 = "
                     + ", ".join(_fmt_c(complex(b)) for b in v.beta[:4]))
    if report.split_view is not None:
        sv = report.split_view
        lines.append("split type: angles = " + ", ".join("%.12g" % a for a in sv.angles)
                     + "; kappas = " + ", ".join("%.12g" % k for k in sv.kappas))
    hs = heat_structure(report)
    shapes = []
    for t in hs.terms:
        if t.kind == "power_log":
            shapes.append("t^%.6g (log t)^%d%s" % (t.xi, t.log_power, " [=0]" if t.vanishes else ""))
        else:
            shapes.append("t^%.6g (log t)^(%d-m)" % (t.xi, t.log_power))
    lines.append("heat trace shapes: " + (", ".join(shapes) if shapes else "regular only")
                 + ("; (log t)^(-1-k) family" if hs.inverse_log_family else ""))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def _apply_flags(cfg: ProblemConfig, args) -> None:
    for flag, key in (("ximax", "ximax"), ("lmax", "lmax"), ("mumax", "mu_max")):
        v = getattr(args, flag, None)
        if v is not None:
            cfg.options[key] = v


def cmd_validate(cfg: ProblemConfig, args) -> int:
    res = validate_lagrangian(cfg.A, cfg.B, cfg.spec)
    lines = [f"problem: {cfg.name or '<config>'}", f"verdict: {res.verdict.value}"]
    code = EXIT_OK if res.ok else EXIT_FAIL
    if res.ok:
        dec = decompose(cfg.A, cfg.B, cfg.spec)
        lines.append(f"decomposable: {'yes' if dec.decomposable else 'no'}")
        if cfg.q0 == 0:
            lines.append("split type: not relevant (q0 = 0)")
        elif dec.decomposable:
            ang = split_angles(dec.A0, dec.B0)
            lines.append("split type: " + ("no" if ang is None else "yes, angles " + ", ".join("%.12g" % a for a in ang)))
        else:
            lines.append("split type: not relevant (not decomposable)")
    fmt = args.format
    if fmt == "json":
        text = json.dumps({"verdict": res.verdict.value, "ok": res.ok, "lines": lines[2:]}, indent=2) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    _emit(text, args.out or cfg.opt("out"))
    return code


def _report(cfg: ProblemConfig) -> SingularityReport:
    return zeta_structure(cfg.A, cfg.B, cfg.spec, float(cfg.opt("ximax")), int(cfg.opt("lmax")), int(cfg.opt("K")))


def cmd_structure(cfg: ProblemConfig, args) -> int:
    report = _report(cfg)
    if args.format == "csv":
        text = _csv(_structure_csv_rows(report_rows(report)), STRUCTURE_COLUMNS)
    elif args.format == "json":
        text = json.dumps(report_to_json(report), indent=2) + "\n"
    else:
        text = _structure_text(cfg, report)
    _emit(text, args.out or cfg.opt("out"))
    return EXIT_OK


def cmd_eigs(cfg: ProblemConfig, args) -> int:
    problem = md.ModelProblem.build(cfg.A, cfg.B, cfg.spec)
    spec = md.find_eigenvalues(problem, float(cfg.opt("mu_max")))
    rows = []
    for mu2, m in spec.eigs:
        mu = math.sqrt(mu2) if mu2 >= 0 else float("nan")
        rows.append([mu, float(mu2), m])
    if args.format == "csv":
        text = _csv(rows, EIG_COLUMNS)
    elif args.format == "json":
        text = json.dumps({"eigs": [[r[1], r[2]] for r in rows], "negative_count": spec.negative_count,
                           "scan_bound": spec.scan_bound, "density_slope": spec.tail.slope,
                           "warnings": list(spec.warnings)}, indent=2) + "\n"
    else:
        lines = [f"problem: {cfg.name or '<config>'}  scan to mu = {spec.scan_bound:g}",
                 f"negative eigenvalues: {spec.negative_count}",
                 "%-24s %-24s %s" % ("mu", "mu^2", "mult")]
        for mu, mu2, m in rows:
            lines.append("%-24.16g %-24.16g %d" % (mu, mu2, m))
        lines += [f"warning: {w}" for w in spec.warnings]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out or cfg.opt("out"))
    return EXIT_OK


@dataclass
class CheckRow:
    check: str
    point: str
    lhs: float
    rhs: float
    diff: float
    tol: float
    status: str


def _check(name, point, lhs, rhs, tol) -> CheckRow:
    diff = abs(lhs - rhs)
    return CheckRow(name, point, float(lhs), float(rhs), float(diff), float(tol), "pass" if diff <= tol else "FAIL")


def run_checks(cfg: ProblemConfig) -> list[CheckRow]:
    """All numerical identity checks that apply to this problem."""
    rows: list[CheckRow] = []
    spec = cfg.spec
    problem = md.ModelProblem.build(cfg.A, cfg.B, spec)
    ximax, lmax = float(cfg.opt("ximax")), int(cfg.opt("lmax"))

    # determinant expansion against numeric substitution
    p = gs.det_p(cfg.A, cfg.B, spec)
    for x, y in ((0.3, 0.7), (-1.2, 0.4), (2.0, 1.5)):
        num = gs.substituted_det(cfg.A, cfg.B, spec, x, y)
        val = p.evaluate(x, y)
        scale = max(1.0, abs(num))
        rows.append(_check("det_p", f"x={x:g} y={y:g}", abs(val - num) / scale, 0.0, cfg.opt("det_tol")))

    # log/exp round trip of the normalized tail
    _, _, _, tail = gs.normalize_leading(p)
    err = gs.round_trip_error(tail, ximax, lmax)
    # rounding grows with the log coefficients, so the tolerance is relative to their size
    coeffs = [abs(c) for c in gs.log_expand(tail, ximax, lmax).as_series().terms.values()]
    scale = max([1.0] + coeffs)
    rows.append(_check("round_trip", f"ximax={ximax:g} lmax={lmax}", err, 0.0, cfg.opt("roundtrip_tol") * scale))

    # resolvent identity
    if problem.real_coefficients:
        spectrum = md.find_eigenvalues(problem, float(cfg.opt("mu_max")))
        lowest = min((mu2 for mu2, _ in spectrum.eigs), default=0.0)
        for x in cfg.opt("x_values"):
            x = float(x) / cfg.R
            point = f"x={x:g}"
            if x * x + lowest <= 0:
                rows.append(CheckRow("resolvent", point, math.nan, math.nan, math.nan, 0.0, "skipped"))
                continue
            exact, bound = md.resolvent_trace_exact(spectrum, x)
            try:
                via = md.resolvent_trace_via_F(problem, x)
            except md.PoleProximityError:
                rows.append(CheckRow("resolvent", point, math.nan, exact, math.nan, 0.0, "skipped"))
                continue
            rows.append(_check("resolvent", point, via, exact, bound + cfg.opt("resolvent_tol")))
    else:
        rows.append(CheckRow("resolvent", "complex Lagrangian", math.nan, math.nan, math.nan, 0.0, "skipped"))

    # large-x asymptotics of log F(ix)
    xs = [float(x) / cfg.R for x in cfg.opt("residual_x")]
    table = md.asymptotic_residual(problem, xs, ximax, lmax, float(cfg.opt("tau_scale")))
    for x, r, pr, tr in zip(table.xs, table.residual, table.predicted, table.truncation):
        rows.append(_check("asymptotic_residual", f"x={x:g}", r, pr, cfg.opt("residual_tol") + tr))

    # exponential integral identity
    for c, s, k, t0 in ((0.0, 1.0, 1, math.e), (0.0, 1.0, 2, math.e), (0.5, 0.7, 1, math.e**2)):
        lhs, rhs, _ = md.verify_logint(c, s, k, t0)
        rows.append(_check("logint", f"c={c:g} s={s:g} k={k} t0={t0:.6g}", lhs, rhs, cfg.opt("logint_tol")))
    return rows


def cmd_verify(cfg: ProblemConfig, args) -> int:
    rows = run_checks(cfg)
    failed = [r for r in rows if r.status == "FAIL"]
    cols = ["check", "point", "lhs", "rhs", "diff", "tol", "status"]
    data = [[r.check, r.point, r.lhs, r.rhs, r.diff, r.tol, r.status] for r in rows]
    if args.format == "csv":
        text = _csv(data, cols)
    elif args.format == "json":
        text = json.dumps({"rows": [dict(zip(cols, d)) for d in data], "ok": not failed}, indent=2) + "\n"
    else:
        lines = [f"problem: {cfg.name or '<config>'}",
                 "%-20s %-34s %-22s %-22s %-10s %-10s %s" % tuple(cols)]
        for r in rows:
            lines.append("%-20s %-34s %-22.15g %-22.15g %-10.3g %-10.3g %s" % (
                r.check, r.point, r.lhs, r.rhs, r.diff, r.tol, r.status))
        lines.append("all checks passed" if not failed else f"{len(failed)} check(s) failed")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out or cfg.opt("out"))
    for r in failed:
        print(f"verification failed: {r.check} at {r.point}: diff {r.diff:.3e} > tol {r.tol:.3e}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def compare_ledgers(expected: list[LedgerRow], computed: list[LedgerRow], tol: float):
    """Match rows by (kind, location, order) and compare leading values and residues."""
    def key(r):
        return (r.kind, round(r.location, 8), r.order)

    comp = {key(r): r for r in computed}
    exp_keys = {key(r) for r in expected}
    out = []
    for e in expected:
        c = comp.get(key(e))
        if c is None:
            out.append((e, None, math.inf, "MISSING"))
            continue
        diff = abs(c.leading - e.leading)
        if e.residue is not None:
            diff = max(diff, abs((c.residue if c.residue is not None else math.inf) - e.residue))
        scale = max(1.0, abs(e.leading))
        out.append((e, c, diff, "match" if diff <= tol * scale else "MISMATCH"))
    for c in computed:
        if key(c) not in exp_keys:
            out.append((None, c, math.inf, "UNEXPECTED"))
    return out


def cmd_examples(name: str | None, args) -> int:
    names = [name] if name else list(BUILTINS)
    blocks, failed = [], False
    json_out = {}
    for n in names:
        b = BUILTINS[n]
        cfg = b.config()
        _apply_flags(cfg, args)
        report = _report(cfg)
        cmp = compare_ledgers(b.expected(cfg), report_rows(report), float(cfg.opt("example_tol")))
        bad = any(status != "match" for *_, status in cmp)
        failed |= bad
        if args.format == "json":
            json_out[n] = {
                "description": b.description,
                "rows": [{"kind": (e or c).kind, "location": (e or c).location, "order_or_ell": (e or c).order,
                          "expected": _cplx(e.leading) if e else None, "computed": _cplx(c.leading) if c else None,
                          "status": st} for e, c, _, st in cmp],
                "report": report_to_json(report),
            }
            continue
        lines = [f"== {n}: {b.description}", f"   expected: {b.notes}",
                 "   %-6s %-14s %-6s %-28s %-28s %s" % ("kind", "location", "ord", "expected leading", "computed leading", "status")]
        for e, c, diff, st in cmp:
            r = e or c
            lines.append("   %-6s %-14.10g %-6d %-28s %-28s %s" % (
                r.kind, r.location, r.order, _fmt_c(e.leading) if e else "-", _fmt_c(c.leading) if c else "-", st))
            if e is not None and e.residue is not None:
                lines.append("   %-6s %-14s %-6s %-28s %-28s" % (
                    "", "residue", "", _fmt_c(e.residue), _fmt_c(c.residue) if c else "-"))
        if report.split_view is not None:
            lines.append("   split kappas: " + (", ".join("%.12g" % k for k in report.split_view.kappas) or "none"))
        lines.append("   ledger " + ("empty" if report.is_empty else "non-empty") + ("; MISMATCH" if bad else "; all match"))
        blocks.append("\n".join(lines))
    if args.format == "json":
        text = json.dumps(json_out, indent=2) + "\n"
    elif args.format == "csv":
        rows = []
        for n in names:
            b = BUILTINS[n]
            cfg = b.config()
            _apply_flags(cfg, args)
            for e, c, diff, st in compare_ledgers(b.expected(cfg), report_rows(_report(cfg)), float(cfg.opt("example_tol"))):
                r = e or c
                el = e.leading if e else complex(math.nan, math.nan)
                cl = c.leading if c else complex(math.nan, math.nan)
                rows.append([n, r.kind, float(r.location), r.order, float(el.real), float(el.imag),
                             float(cl.real), float(cl.imag), st])
        text = _csv(rows, ["example", "kind", "location", "order_or_ell", "expected_re", "expected_im",
                           "computed_re", "computed_im", "status"])
    else:
        text = "\n\n".join(blocks) + "\n"
    _emit(text, args.out)
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cone-zeta", description="Zeta function singularities on cones.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="JSON problem file or builtin:NAME")
        p.add_argument("--ximax", type=float, help="exponent truncation (default %(default)s)", default=None)
        p.add_argument("--lmax", type=int, help="log-power truncation", default=None)
        p.add_argument("--mumax", type=float, help="eigenvalue scan bound", default=None)
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=["text", "csv", "json"], default="text")

    common(sub.add_parser("validate", help="check the boundary Lagrangian"))
    common(sub.add_parser("structure", help="poles and logarithms of the zeta function"))
    common(sub.add_parser("eigs", help="eigenvalues of the model operator"))
    common(sub.add_parser("verify", help="numerical identity checks"))
    ex = sub.add_parser("examples", help="run built-in examples against their closed forms")
    ex.add_argument("name", nargs="?", choices=sorted(BUILTINS))
    common(ex, config=False)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "examples":
            return cmd_examples(args.name, args)
        cfg = load_config(args.config)
        _apply_flags(cfg, args)
        handler = {"validate": cmd_validate, "structure": cmd_structure, "eigs": cmd_eigs, "verify": cmd_verify}
        if args.command != "validate":
            res = validate_lagrangian(cfg.A, cfg.B, cfg.spec)
            if not res.ok:
                print(f"error: invalid Lagrangian: {res.verdict.value}", file=sys.stderr)
                return EXIT_FAIL
        return handler[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvalidLagrangianError, gs.DegenerateDeterminantError, gs.PreconditionError,
            md.UnsupportedModeError, md.InsufficientScanError, md.PoleProximityError,
            OverflowError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
