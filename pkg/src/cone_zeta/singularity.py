r"""Singular structure of the zeta function and the matching trace expansions.

From the log-expansion table :math:`c_{\ell\xi}` of the normalized
determinant polynomial, the singular part of :math:`\zeta(s)` is

.. math::
    \frac{\sin \pi s}{\pi}\Big\{(j_0 - q_0)e^{-2s\tilde\gamma}\log s
    + \sum_{\xi\in P}\frac{f_\xi(s)}{(s+\xi)^{|p_\xi|+1}}
    + \sum_{\xi\in L} g_\xi(s)\log(s+\xi)\Big\},

with :math:`\tilde\gamma = \log 2 - \gamma`.  Only the leading data of
:math:`f_\xi` and :math:`g_\xi` are determined, and only those are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bessel import EULER_GAMMA, GAMMA_TILDE
from .genseries import (
    DEFAULT_LMAX,
    DEFAULT_XIMAX,
    MERGE_TOL,
    CTable,
    beta_coeffs,
    det_p,
    extract_markers,
    log_expand,
    normalize_leading,
    poly_degree,
    poly_p0,
    poly_p1,
)
from .symplectic import (
    InvalidLagrangianError,
    SpectralSpec,
    decompose,
    split_angles,
    validate_lagrangian,
)

DEFAULT_K = 24

__all__ = [
    "DEFAULT_K",
    "EULER_GAMMA",
    "GAMMA_TILDE",
    "DecomposableView",
    "HeatStructure",
    "HeatTerm",
    "LogEntry",
    "LogPowerSum",
    "PoleEntry",
    "SingularityReport",
    "SplitView",
    "decomposable_structure",
    "heat_structure",
    "resolvent_tail_terms",
    "zeta_structure",
]


def _is_integer(xi: float) -> bool:
    return abs(xi - round(xi)) < MERGE_TOL


@dataclass(frozen=True)
class PoleEntry:
    """Pole of order |p_xi| + 1 at s = -xi with leading value f_xi(-xi)."""

    location: float
    order: int
    leading: complex
    combined_residue: complex | None
    integer_flag: bool
    p: int = 0

    @property
    def xi(self) -> float:
        return -self.location


@dataclass(frozen=True)
class LogEntry:
    """log(s + xi) singularity whose coefficient g_xi vanishes to order ell_xi - 1."""

    location: float
    ell: int
    leading: complex

    @property
    def xi(self) -> float:
        return -self.location


@dataclass(frozen=True)
class DecomposableView:
    r"""f(s) = sum_k beta_k (-2s)^{k-1}/(k-1)! and simple poles with f_xi(-xi) = -c_xi xi."""

    beta: np.ndarray
    poles: tuple[PoleEntry, ...]
    log_at_zero_coeff: int
    c_xi: tuple[tuple[float, complex], ...] = ()

    @property
    def f_coeffs(self) -> np.ndarray:
        """Taylor coefficients of f(s) in powers of s (truncated at len(beta))."""
        k = np.arange(1, len(self.beta) + 1)
        fact = np.array([math.factorial(int(i) - 1) for i in k], dtype=float)
        return self.beta * (-2.0) ** (k - 1) / fact

    def f(self, s: complex) -> complex:
        return complex(np.polynomial.polynomial.polyval(s, self.f_coeffs))

    def remainder_bound(self, s: complex, kappa_max: float) -> float:
        """Taylor remainder of sum_l exp(-2 s kappa_l) after K terms, |x| = |2 s| kappa_max.

        Each exponential contributes at most |x|^K e^|x| / K!; beta_1 counts them.
        """
        K = len(self.beta)
        x = abs(2.0 * s) * kappa_max
        return x**K * math.exp(x) / math.factorial(K) * max(1.0, abs(self.beta[0]))


@dataclass(frozen=True)
class SplitView:
    """Split-type angles and kappa_l = log 2 - gamma - tan(theta_l), theta_l != pi/2."""

    angles: tuple[float, ...]
    kappas: tuple[float, ...]

    def f(self, s: complex) -> complex:
        return complex(sum(np.exp(-2.0 * s * k) for k in self.kappas))


@dataclass(frozen=True)
class SingularityReport:
    spec: SpectralSpec
    j0: int
    log_at_zero_coeff: int
    poles: tuple[PoleEntry, ...]
    logs: tuple[LogEntry, ...]
    truncation: tuple[float, int]
    table: CTable | None = None
    unreliable: tuple[float, ...] = ()
    decomposable_view: DecomposableView | None = None
    split_view: SplitView | None = None

    @property
    def is_empty(self) -> bool:
        """True when only the regular part remains: no poles, no logs, no log s term."""
        return not self.poles and not self.logs and self.log_at_zero_coeff == 0


def _pole(xi: float, p: int, c: complex) -> PoleEntry:
    n = abs(p)
    leading = (-1) ** (n + 1) * c * xi * math.factorial(n) / 2.0**n
    integer = _is_integer(xi)
    combined = None
    if n == 0 and not integer:
        combined = math.sin(-math.pi * xi) / math.pi * leading
    return PoleEntry(-xi, n + 1, complex(leading), combined, integer, p)


def _log(xi: float, ell: int, c: complex) -> LogEntry:
    base = c * 2.0**ell / math.factorial(ell - 1)
    leading = base if xi < MERGE_TOL else -base * xi
    return LogEntry(-xi, ell, complex(leading))


def _split_view(angles) -> SplitView | None:
    if angles is None:
        return None
    kappas = tuple(
        GAMMA_TILDE - math.tan(t) for t in angles if abs(t - 0.5 * math.pi) > 1e-12
    )
    return SplitView(tuple(angles), kappas)


def zeta_structure(
    A, B, spec: SpectralSpec, ximax: float = DEFAULT_XIMAX, lmax: int = DEFAULT_LMAX, K: int = DEFAULT_K
) -> SingularityReport:
    """Poles, logarithms and the log s coefficient for an arbitrary Lagrangian."""
    check = validate_lagrangian(A, B, spec)
    if not check.ok:
        raise InvalidLagrangianError(f"invalid Lagrangian: {check.verdict.value}")
    p = det_p(A, B, spec)
    j0, _, _, tail = normalize_leading(p)
    table = extract_markers(log_expand(tail, ximax, lmax))
    poles, logs, unreliable = [], [], []
    for e in table.entries:
        if e.p is not None and e.xi >= MERGE_TOL:
            poles.append(_pole(e.xi, e.p, e.c(e.p)))
        if e.ell is not None:
            logs.append(_log(e.xi, e.ell, e.c(e.ell)))
        if e.unreliable:
            unreliable.append(e.xi)
    poles.sort(key=lambda x: -x.location)
    logs.sort(key=lambda x: -x.location)
    dview = sview = None
    dec = decompose(A, B, spec)
    if dec.decomposable:
        sub = decomposable_structure(dec.A0, dec.B0, dec.A1, dec.B1, spec, K, ximax)
        dview = sub.decomposable_view
        sview = _split_view(dec.split_angles)
    return SingularityReport(
        spec,
        j0,
        j0 - spec.q0,
        tuple(poles),
        tuple(logs),
        (ximax, lmax),
        table,
        tuple(unreliable),
        dview,
        sview,
    )


def decomposable_structure(
    A0, B0, A1, B1, spec: SpectralSpec, K: int = DEFAULT_K, ximax: float = DEFAULT_XIMAX
) -> SingularityReport:
    """Report for L = L0 + L1 from the block polynomials p0(z) and p1(y).

    The log s term is -f(s) log s with f(0) = beta_1 = deg p0, so the
    coefficient comparable to (j0 - q0) is -deg p0.  Poles are simple with
    f_xi(-xi) = -c_xi xi.
    """
    if spec.q0:
        p0 = poly_p0(A0, B0)
        beta = beta_coeffs(p0, K)
        deg = poly_degree(p0)
    else:
        beta = np.zeros(K, dtype=complex)
        deg = 0
    poles, cx = [], []
    truncation = (ximax, 0)
    table = None
    if spec.q1:
        res = poly_p1(A1, B1, spec, ximax)
        table = res.table
        for e in res.table.entries:
            c = e.c(0)
            if c == 0 or e.xi < MERGE_TOL:
                continue
            cx.append((e.xi, c))
            poles.append(_pole(e.xi, 0, c))
    poles.sort(key=lambda x: -x.location)
    angles = None
    if spec.q0:
        angles = split_angles(A0, B0)
    view = DecomposableView(beta, tuple(poles), -deg, tuple(cx))
    return SingularityReport(
        spec,
        spec.q0 - deg,
        -deg,
        tuple(poles),
        (),
        truncation,
        table,
        (),
        view,
        _split_view(angles),
    )


# ---------------------------------------------------------------------------
# resolvent tail


class LogPowerSum:
    r"""Finite sums of c u^{-a} (C - log u)^{-b} with u = -lambda.

    Closed under d/dlambda = -d/du, using
    d/du [u^{-a}(C - L)^{-b}] = -a u^{-a-1}(C - L)^{-b} + b u^{-a-1}(C - L)^{-b-1}.
    """

    def __init__(self, terms=None):
        self.terms: dict[tuple[float, float, int], complex] = dict(terms or {})

    def add(self, coef: complex, a: float, C: float, b: int) -> None:
        key = (float(a), float(C), int(b))
        self.terms[key] = self.terms.get(key, 0.0) + coef

    def d_lambda(self) -> "LogPowerSum":
        out = LogPowerSum()
        for (a, C, b), c in self.terms.items():
            if a != 0:
                out.add(a * c, a + 1.0, C, b)
            if b != 0:
                out.add(-b * c, a + 1.0, C, b + 1)
        out.terms = {k: v for k, v in out.terms.items() if v != 0}
        return out

    def d_lambda_n(self, n: int) -> "LogPowerSum":
        out = self
        for _ in range(n):
            out = out.d_lambda()
        return out

    def evaluate(self, lam: float) -> complex:
        u = -lam
        if u <= 0:
            raise ValueError("lambda must lie on the negative real axis")
        lu = math.log(u)
        return complex(sum(c * u ** (-a) * (C - lu) ** (-b) for (a, C, b), c in self.terms.items()))


def _general_tail(report: SingularityReport) -> tuple[LogPowerSum, LogPowerSum]:
    first = LogPowerSum()
    q0_minus_j0 = -report.log_at_zero_coeff
    if q0_minus_j0:
        # (q0 - j0) / (u (L - 2 g)) = -(q0 - j0) u^-1 (2 g - L)^-1
        first.add(-q0_minus_j0, 1.0, 2.0 * GAMMA_TILDE, 1)
    second = LogPowerSum()
    if report.table is not None:
        for e in report.table.entries:
            for ell, c in e.coeffs.items():
                if c != 0:
                    second.add(2.0**ell * c, e.xi, 2.0 * GAMMA_TILDE, ell)
    return first, second


def _decomposable_tail(view: DecomposableView) -> tuple[LogPowerSum, LogPowerSum]:
    first = LogPowerSum()
    for k, b in enumerate(view.beta, start=1):
        if b != 0:
            # 2^{k-1} beta_k u^-1 L^-k, with L^-k = (-1)^k (0 - L)^-k
            first.add(2.0 ** (k - 1) * b * (-1) ** k, 1.0, 0.0, k)
    second = LogPowerSum()
    for xi, c in view.c_xi:
        second.add(c, xi, 0.0, 0)
    return first, second


def resolvent_tail_terms(report: SingularityReport, N: int, lam: float, path: str = "general") -> complex:
    r"""L-dependent tail of Tr(Delta_L - lambda)^{-N-1} at negative real lambda.

    ``path="general"`` evaluates
    (1/N!) d^N/dlambda^N {(q0 - j0)/(u (log u - 2 g))}
    - (1/N!) d^{N+1}/dlambda^{N+1} {sum 2^l c_{l xi} u^{-xi} (2 g - log u)^{-l}},
    ``path="decomposable"`` the block form with beta_k and c_xi.  N = 0 is
    accepted and evaluates the first bracket undifferentiated.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if path == "general":
        first, second = _general_tail(report)
    elif path == "decomposable":
        if report.decomposable_view is None:
            raise ValueError("report has no decomposable view")
        first, second = _decomposable_tail(report.decomposable_view)
    else:
        raise ValueError(f"unknown path {path!r}")
    norm = 1.0 / math.factorial(N)
    return norm * (first.d_lambda_n(N).evaluate(lam) - second.d_lambda_n(N + 1).evaluate(lam))


# ---------------------------------------------------------------------------
# heat trace shapes


@dataclass(frozen=True)
class HeatTerm:
    """One shape in the small-t heat trace expansion.

    ``kind`` is ``"power_log"`` for t^xi (log t)^k, ``"inverse_log_family"`` for
    t^xi (log t)^{-k0-m}, m >= 0.  ``vanishes`` marks coefficients forced to zero.
    """

    kind: str
    xi: float
    log_power: int
    vanishes: bool = False


@dataclass(frozen=True)
class HeatStructure:
    regular_powers: str = "t^((-n+k)/2), k >= 0"
    log_t: bool = True
    inverse_log_family: bool = False
    terms: tuple[HeatTerm, ...] = field(default_factory=tuple)
    decomposable: bool = False


def heat_structure(report: SingularityReport) -> HeatStructure:
    """Expansion shapes of Tr exp(-t Delta_L) as t -> 0 (coefficients not computed)."""
    if report.decomposable_view is not None:
        view = report.decomposable_view
        terms = tuple(HeatTerm("power_log", p.xi, 0) for p in view.poles)
        family = bool(np.any(view.beta != 0))
        return HeatStructure(inverse_log_family=family, terms=terms, decomposable=True)
    terms = []
    for p in report.poles:
        xi = p.xi
        top = p.order
        for k in range(top + 1):
            vanishes = (k == 0 and abs(xi - 1.0) < MERGE_TOL) or (k == top and not _is_integer(xi))
            terms.append(HeatTerm("power_log", xi, k, vanishes))
    for lg in report.logs:
        terms.append(HeatTerm("inverse_log_family", lg.xi, -lg.ell))
    family = report.log_at_zero_coeff != 0 or any(lg.xi < MERGE_TOL for lg in report.logs)
    return HeatStructure(inverse_log_family=family, terms=tuple(terms))
