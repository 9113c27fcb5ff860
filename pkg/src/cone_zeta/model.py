r"""The model operator -d^2/dr^2 + r^{-2} A on [0, R] with Dirichlet data at R.

Its eigenvalues mu^2 are the zeros of

.. math::
    F(\mu) = \det\begin{pmatrix} A & B \\ J_+(\mu) & J_-(\mu) \end{pmatrix}
           = \det\big(A\,J_-(\mu) - B\,J_+(\mu)\big),

the second form holding because the lower blocks are diagonal.  Entries are
carried in even normalized forms, so F is a function of mu^2 and F(0) is the
exact mu = 0 Dirichlet condition.  On the imaginary axis every lower row is
scaled by exp(-x R), so log F(ix) = q x R + log det(scaled matrix).

The trace identity used throughout is

.. math::
    2x\,\mathrm{Tr}(\mathcal L + x^2)^{-1} = \frac{d}{dx}\log F(ix).
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from . import kernels as _k
from .bessel import GAMMA_TILDE, expint_k
from .genseries import (
    DEFAULT_LMAX,
    DEFAULT_XIMAX,
    GenSeries,
    det_p,
    extract_markers,
    log_expand,
    normalize_leading,
)
from .symplectic import Lagrangian, SpectralSpec, require_valid

#: relative threshold (against the Hadamard bound) below which F counts as zero
ZERO_REL = 1e-10
#: default negative-eigenvalue scan bound, in units of 1/R
X_NEG_FACTOR = 50.0
#: log-scaled evaluation is mandatory above this exponent
LOG_LIMIT = 700.0
#: extra exponent range and log powers used to measure c-table truncation
EXTEND_XI = 2.0
EXTEND_L = 4


class UnsupportedModeError(ValueError):
    """The numeric eigen-solver needs real boundary matrices."""


class InsufficientScanError(RuntimeError):
    """The eigenvalue scan does not reach far enough for the requested tolerance."""

    def __init__(self, message: str, mu_max_needed: float):
        super().__init__(message)
        self.mu_max_needed = mu_max_needed


class PoleProximityError(ValueError):
    """log F(ix) was requested too close to a zero of F(ix)."""


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CONE_ZETA_THREADS", "1")))
    except ValueError:
        return 1


def real_form(A, B) -> tuple[np.ndarray, np.ndarray] | None:
    """Real matrices with the same row space as (A B), or None if none exist.

    The row space is real iff it equals its conjugate, i.e. iff stacking
    (A B) with its conjugate does not raise the rank.
    """
    ab = np.hstack([np.asarray(A, dtype=complex), np.asarray(B, dtype=complex)])
    q = ab.shape[0]
    if np.all(ab.imag == 0):
        return ab[:, :q].real.copy(), ab[:, q:].real.copy()
    both = np.vstack([ab, ab.conj()])
    s = np.linalg.svd(both, compute_uv=False)
    if np.sum(s > 1e-10 * s[0]) != q:
        return None
    _, _, vh = np.linalg.svd(np.vstack([ab.real, ab.imag]))
    rows = vh[:q]
    return rows[:, :q].copy(), rows[:, q:].copy()


@dataclass(frozen=True)
class ModelProblem:
    """A spectral spec with a validated boundary Lagrangian."""

    spec: SpectralSpec
    lagrangian: Lagrangian
    real_coefficients: bool
    real_A: np.ndarray | None = None
    real_B: np.ndarray | None = None

    @classmethod
    def build(cls, A, B, spec: SpectralSpec) -> "ModelProblem":
        lag = require_valid(A, B, spec)
        rf = real_form(lag.A, lag.B)
        if rf is None:
            return cls(spec, lag, False)
        return cls(spec, lag, True, rf[0], rf[1])

    @property
    def A(self) -> np.ndarray:
        return self.lagrangian.A

    @property
    def B(self) -> np.ndarray:
        return self.lagrangian.B

    def _ab(self, real: bool):
        if real:
            if not self.real_coefficients:
                raise UnsupportedModeError(
                    "the eigenvalue scan needs a Lagrangian with a real basis; "
                    "complex-plane zero finding is not provided"
                )
            return self.real_A, self.real_B
        return self.A, self.B


@dataclass(frozen=True)
class TailModel:
    """Linear eigenvalue density used to continue sums beyond the scan.

    ``last`` holds the q largest found mu (with multiplicity), each taken as
    the start of one asymptotically pi/R-spaced family; ``drift`` is the
    observed deviation of the spacing from pi/R for each of them.
    """

    slope: float
    spacing: float
    last: tuple[float, ...]
    drift: tuple[float, ...]


@dataclass(frozen=True)
class ModelSpectrum:
    eigs: tuple[tuple[float, int], ...]
    negative_count: int
    scan_bound: float
    tail: TailModel
    warnings: tuple[str, ...] = ()

    def expanded_mus(self) -> np.ndarray:
        """Positive mu values repeated by multiplicity, ascending."""
        out = []
        for mu2, m in self.eigs:
            if mu2 > 0:
                out.extend([math.sqrt(mu2)] * m)
        return np.array(out)

    @property
    def mu2_values(self) -> np.ndarray:
        return np.array([e[0] for e in self.eigs])


# ---------------------------------------------------------------------------
# determinants


def _mat_det(a, b, jp, jm) -> tuple[np.ndarray, np.ndarray]:
    """det(A diag(jm) - B diag(jp)) and a cancellation-free size, batched over rows.

    The size is the Hadamard bound of |A| diag|jm| + |B| diag|jp|, so a small
    ratio |det| / size flags cancellation even when q = 1.
    """
    m = a[None, :, :] * jm[:, None, :] - b[None, :, :] * jp[:, None, :]
    mag = np.abs(a)[None, :, :] * np.abs(jm)[:, None, :] + np.abs(b)[None, :, :] * np.abs(jp)[:, None, :]
    d = np.linalg.det(m)
    h = np.prod(np.linalg.norm(mag, axis=1), axis=1)
    return d, h


def _real_batch(problem: ModelProblem, mus: np.ndarray, real: bool):
    a, b = problem._ab(real)
    s = problem.spec
    n = _threads()
    mus = np.asarray(mus, dtype=float)
    if n == 1 or mus.size < 64:
        jp, jm = _k.real_entries(s.nus, s.q0, s.R, mus)
        return _mat_det(a, b, jp, jm)
    chunks = np.array_split(mus, n)

    def work(chunk):
        jp, jm = _k.real_entries(s.nus, s.q0, s.R, chunk)
        return _mat_det(a, b, jp, jm)

    with ThreadPoolExecutor(max_workers=n) as pool:
        parts = list(pool.map(work, chunks))
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def _imag_batch(problem: ModelProblem, xs: np.ndarray, real: bool):
    a, b = problem._ab(real)
    s = problem.spec
    ip, im = _k.imag_entries(s.nus, s.q0, s.R, np.asarray(xs, dtype=float))
    return _mat_det(a, b, ip, im)


def F_mu(problem: ModelProblem, mu: float) -> complex:
    """F(mu); only mu^2 enters, so F(-mu) = F(mu) by construction."""
    d, _ = _real_batch(problem, np.array([abs(float(mu))]), False)
    return complex(d[0])


def F_mu_array(problem: ModelProblem, mus) -> np.ndarray:
    """F on an array of mu (real basis when available, so values are real)."""
    d, _ = _real_batch(problem, np.abs(np.asarray(mus, dtype=float)), problem.real_coefficients)
    return d


def F_ix(problem: ModelProblem, x: float, log_scaled: bool = False) -> complex:
    """F(ix) for x > 0.

    With ``log_scaled=True`` the complex logarithm q x R + log det(scaled) is
    returned, which never overflows.  Plain values are refused once q x R
    exceeds the double range.
    """
    if x <= 0:
        raise ValueError("F_ix needs x > 0")
    s = problem.spec
    d, _ = _imag_batch(problem, np.array([float(x)]), False)
    expo = s.q * x * s.R
    if log_scaled:
        return complex(np.log(complex(d[0]))) + expo
    if expo > LOG_LIMIT:
        raise OverflowError(
            f"F(ix) overflows for x > {LOG_LIMIT / (s.q * s.R):.6g}; use log_scaled=True"
        )
    return complex(d[0]) * math.exp(expo)


def _log_abs_scaled(problem: ModelProblem, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d, h = _imag_batch(problem, xs, False)
    return np.log(np.abs(d)), np.abs(d) / np.where(h > 0, h, 1.0)


# ---------------------------------------------------------------------------
# eigenvalues


def _scan_roots(func, grid: np.ndarray, values: np.ndarray, scales: np.ndarray) -> list[tuple[float, int]]:
    """Roots of a real function from samples: sign changes plus touching minima."""
    roots: list[tuple[float, int]] = []
    n = len(grid)

    def refine(a, b):
        return optimize.brentq(func, a, b, xtol=1e-15, rtol=1e-15, maxiter=200)

    for i in range(n - 1):
        fa, fb = values[i], values[i + 1]
        if fa == 0.0:
            roots.append((grid[i], 0))
        elif fa * fb < 0:
            roots.append((refine(grid[i], grid[i + 1]), 0))
    for i in range(1, n - 1):
        fa, fm, fb = values[i - 1], values[i], values[i + 1]
        if fa * fm <= 0 or fm * fb <= 0:
            continue
        if not (abs(fm) < abs(fa) and abs(fm) < abs(fb)):
            continue
        sgn = 1.0 if fm > 0 else -1.0
        lo, hi = grid[i - 1], grid[i + 1]
        res = optimize.minimize_scalar(
            lambda t: sgn * func(t), bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-13 * max(1.0, hi)},
        )
        t, ft = float(res.x), sgn * float(res.fun)
        if ft * sgn < 0:
            roots.append((refine(lo, t), 0))
            roots.append((refine(t, hi), 0))
        elif abs(ft) <= 1e-8 * scales[i]:
            roots.append((t, 2))
    roots.sort()
    return roots


def _multiplicity(func, root: float, step: float, hint: int) -> int:
    if hint:
        return hint
    vals = []
    for d in (step, 2.0 * step):
        vals.append(abs(func(root + d)) + abs(func(root - d)))
    if vals[0] == 0.0:
        return 1
    m = math.log2(vals[1] / vals[0])
    return max(1, int(round(m)))


def _dedupe(roots, tol):
    out = []
    for r, m in roots:
        if out and abs(r - out[-1][0]) <= tol * max(1.0, abs(r)):
            out[-1] = (out[-1][0], max(out[-1][1], m))
        else:
            out.append((r, m))
    return out


def find_eigenvalues(problem: ModelProblem, mu_max: float, x_neg_max: float | None = None) -> ModelSpectrum:
    """All eigenvalues mu^2 with |mu| <= mu_max, plus negative ones -x^2.

    Positive part: F sampled on a grid of step pi/(4 R q) (with a logarithmic
    prefix near 0), sign changes refined by Brent's method, touching zeros
    found as local minima of |F|.  Negative part: the same on the scaled
    F(ix) over (0, x_neg_max].  The order of each zero is read off from
    |F(mu* + 2d)| / |F(mu* + d)| ~ 2^m and taken as the multiplicity.
    """
    if not problem.real_coefficients:
        problem._ab(True)
    if mu_max <= 0:
        raise ValueError("mu_max must be positive")
    s = problem.spec
    R, q = s.R, s.q
    h = math.pi / (4.0 * R * q)
    notes = []

    # zero mode: F(0) from the exact mu = 0 entries
    a, b = problem._ab(True)
    jp0, jm0 = _k.real_entries(s.nus, s.q0, R, np.array([0.0]))
    full = np.block([[a, b], [np.diag(jp0[0]), np.diag(jm0[0])]])
    sv = np.linalg.svd(full, compute_uv=False)
    zero_mult = int(np.sum(sv <= ZERO_REL * sv[0]))

    prefix = np.geomspace(1e-4 / R, 0.37 * h, 24)[:-1]
    body = h * (np.arange(int(mu_max / h) + 2) + 0.37)
    grid = np.concatenate([prefix, body[body <= mu_max + h]])
    vals, scales = _real_batch(problem, grid, True)
    vals = vals.real

    def f(mu):
        return float(_real_batch(problem, np.array([mu]), True)[0][0].real)

    roots = _scan_roots(f, grid, vals, scales)
    roots = _dedupe([(r, m) for r, m in roots if 0 < r <= mu_max], 1e-11)
    eigs = []
    for r, m in roots:
        eigs.append((r * r, _multiplicity(f, r, 1e-3 * h, m)))

    # negative eigenvalues
    xmax = X_NEG_FACTOR / R if x_neg_max is None else x_neg_max
    xg = np.concatenate([np.geomspace(1e-4 / R, h, 24)[:-1], np.arange(h, xmax + h, h)])
    dv, dh = _imag_batch(problem, xg, True)

    def g(x):
        return float(_imag_batch(problem, np.array([x]), True)[0][0].real)

    neg = _dedupe(_scan_roots(g, xg, dv.real, dh), 1e-11)
    negs = [(-x * x, _multiplicity(g, x, 1e-3 * h, m)) for x, m in neg if x > 0]
    negs.sort()

    all_eigs = negs + ([(0.0, zero_mult)] if zero_mult else []) + eigs
    count = sum(m for mu2, m in eigs)
    expected = q * R * mu_max / math.pi
    if abs(count - expected) > 2.0 + 0.5 * q:
        msg = f"found {count} eigenvalues below mu={mu_max:g}, density predicts {expected:.1f}"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes.append(msg)

    expanded = []
    for mu2, m in eigs:
        expanded.extend([math.sqrt(mu2)] * m)
    spacing = math.pi / R
    last = tuple(expanded[-q:]) if len(expanded) >= q else tuple(expanded)
    drift = []
    for i in range(len(expanded) - len(last), len(expanded)):
        if i - q >= 0:
            drift.append(abs(expanded[i] - expanded[i - q] - spacing))
        else:
            drift.append(spacing)
    tail = TailModel(q * R / math.pi, spacing, last, tuple(drift))
    return ModelSpectrum(tuple(all_eigs), sum(m for _, m in negs), float(mu_max), tail, tuple(notes))


# ---------------------------------------------------------------------------
# traces


def _tail_sum(spectrum: ModelSpectrum, f, fprime, f3, integral) -> tuple[float, float]:
    """Midpoint Euler-Maclaurin continuation of each family, and an error bound.

    Family i continues as mu_i + k h, k >= 1, h = pi/R:
    sum_k f(mu_i + k h) ~ (1/h) int_{M_i}^inf f + (h/24) f'(M_i) - (7 h^3/5760) f'''(M_i),
    M_i = mu_i + h/2.  The bound takes the size of the last kept term plus the residual
    spacing drift delta_i, accumulated over the tail.
    """
    t = spectrum.tail
    h = t.spacing
    value = 0.0
    bound = 0.0
    for mu, delta in zip(t.last, t.drift):
        M = mu + 0.5 * h
        em = 7.0 * h**3 / 5760.0 * f3(M)
        value += integral(M) / h + h / 24.0 * fprime(M) - em
        em = abs(em)
        shift = delta * mu / h * max(1.0, math.log(max(mu, 1.0)))
        bound += em + shift * abs(f(M)) / h
    return value, bound


def resolvent_trace_exact(spectrum: ModelSpectrum, x: float, tol: float | None = None) -> tuple[float, float]:
    """sum_j m_j / (mu_j^2 + x^2) over the spectrum plus a tail correction.

    Returns (value, tail error bound).  With ``tol`` given, raises
    :class:`InsufficientScanError` when the bound exceeds it.
    """
    x2 = x * x
    lowest = min((mu2 for mu2, _ in spectrum.eigs), default=0.0)
    if x2 + lowest <= 0:
        raise ValueError("x^2 must exceed the magnitude of the most negative eigenvalue")
    direct = math.fsum(m / (mu2 + x2) for mu2, m in spectrum.eigs)

    def f(mu):
        return 1.0 / (mu * mu + x2)

    def fp(mu):
        return -2.0 * mu / (mu * mu + x2) ** 2

    def f3(mu):
        return 24.0 * mu * (x2 - mu * mu) / (mu * mu + x2) ** 4

    def integral(M):
        return math.atan2(x, M) / x

    tail, bound = _tail_sum(spectrum, f, fp, f3, integral)
    if tol is not None and bound > tol:
        need = spectrum.scan_bound * math.sqrt(bound / tol)
        raise InsufficientScanError(
            f"tail bound {bound:.3e} exceeds tolerance {tol:.3e}; scan to mu_max ~ {need:.4g}", need
        )
    return direct + tail, bound


def heat_trace_partial(spectrum: ModelSpectrum, t: float, tol: float | None = None) -> tuple[float, float]:
    """sum_j m_j exp(-t mu_j^2) plus the density tail; returns (value, bound)."""
    if t <= 0:
        raise ValueError("t must be positive")
    direct = math.fsum(m * math.exp(-t * mu2) for mu2, m in spectrum.eigs)

    def f(mu):
        return math.exp(-t * mu * mu)

    def fp(mu):
        return -2.0 * t * mu * f(mu)

    def f3(mu):
        return (-8.0 * t**3 * mu**3 + 12.0 * t * t * mu) * f(mu)

    def integral(M):
        return 0.5 * math.sqrt(math.pi / t) * math.erfc(M * math.sqrt(t))

    tail, bound = _tail_sum(spectrum, f, fp, f3, integral)
    if tol is not None and bound > tol:
        need = math.sqrt(spectrum.scan_bound**2 + math.log(max(bound / tol, 1.0)) / t)
        raise InsufficientScanError(
            f"tail bound {bound:.3e} exceeds tolerance {tol:.3e}; scan to mu_max ~ {need:.4g}", need
        )
    return direct + tail, bound


def dlog_F_ix(problem: ModelProblem, x: float) -> float:
    """d/dx log|F(ix)| by central differences on the scaled determinant.

    Step h = 1e-4 x with one Richardson step (error O(h^4)); the exact
    q R from the exp(q x R) scaling is added back analytically.
    """
    if x <= 0:
        raise ValueError("x must be positive")
    hh = 1e-4 * x
    pts = np.array([x - 2 * hh, x - hh, x, x + hh, x + 2 * hh])
    logs, rel = _log_abs_scaled(problem, pts)
    if rel[2] < ZERO_REL or np.any(~np.isfinite(logs)):
        raise PoleProximityError("resolvent pole proximity: F(ix) vanishes near this x")
    d1 = (logs[3] - logs[1]) / (2 * hh)
    d2 = (logs[4] - logs[0]) / (4 * hh)
    s = problem.spec
    return s.q * s.R + (4.0 * d1 - d2) / 3.0


def resolvent_trace_via_F(problem: ModelProblem, x: float) -> float:
    """Tr(L + x^2)^{-1} = (1/(2x)) d/dx log F(ix)."""
    return dlog_F_ix(problem, x) / (2.0 * x)


# ---------------------------------------------------------------------------
# large-x asymptotics


def _dlog_scaled_kernel(v: float, z: float) -> float:
    """d/dz log(exp(-z) S^I_v(z)), Richardson-extrapolated central difference."""
    hh = 1e-4 * z
    vals = [math.log(_k.inorm_scaled(v, z + k * hh)[0]) for k in (-2, -1, 1, 2)]
    d1 = (vals[2] - vals[1]) / (2 * hh)
    d2 = (vals[3] - vals[0]) / (4 * hh)
    return (4.0 * d1 - d2) / 3.0


@dataclass(frozen=True)
class ResidualTable:
    xs: tuple[float, ...]
    residual: tuple[float, ...]
    predicted: tuple[float, ...]
    truncation: tuple[float, ...]
    decay_exponent: float


def asymptotic_terms(ctable, j0: int, q0: int, x: float) -> float:
    """(q0 - j0)/(x (log x - g)) + sum c x^{-2 xi - 1}[l (g - log x)^{-l-1} - 2 xi (g - log x)^{-l}]."""
    lx = math.log(x)
    u = GAMMA_TILDE - lx
    val = 0.0
    if q0 != j0:
        val += (q0 - j0) / (x * (lx - GAMMA_TILDE))
    if ctable is not None:
        for e in ctable.entries:
            for ell, c in e.coeffs.items():
                val += (c * x ** (-2.0 * e.xi - 1.0) * (ell * u ** (-ell - 1) - 2.0 * e.xi * u ** (-ell))).real
    return val


def truncation_estimate(ctable, extended, j0: int, q0: int, x: float) -> float:
    """Size of the omitted part of the c-table sum at x.

    Measured as the change in :func:`asymptotic_terms` when the table is
    rebuilt with larger truncation (``extended``).  Rows with negative l
    grow like |log x|^{|l|}, so a single next-term guess is not reliable.
    """
    return abs(asymptotic_terms(extended, j0, q0, x) - asymptotic_terms(ctable, j0, q0, x))


def predicted_residual(problem: ModelProblem, alpha0: float, x: float) -> float:
    """Next-order part of d/dx log F(ix) not in the c-table terms.

    Exactly, F(ix) = const * prod_j S^I_{-nu_j}(xR) * I_0(xR)^{q0} times the
    normalized p evaluated at ((g - log x - K_0/I_0)^{-1}, tau x^{-2 nu} I_nu/I_-nu),
    and the last two corrections are exponentially small.  So up to those
    and the c-table truncation the residual is
    d/dx [sum_j log S^I_{-nu_j}(xR) + q0 log I_0(xR)] - q R - 2 alpha0 / x.
    """
    s = problem.spec
    z = x * s.R
    val = 0.0
    for v in s.nus:
        val += s.R * _dlog_scaled_kernel(-v, z)
    if s.q0:
        val += s.q0 * s.R * _dlog_scaled_kernel(0.0, z)
    return val - 2.0 * alpha0 / x


def asymptotic_ctable(problem: ModelProblem, ximax: float = DEFAULT_XIMAX, lmax: int = DEFAULT_LMAX,
                      tau_scale: float = 1.0):
    """(j0, alpha0, c-table) of the normalized p(x, y) for this problem.

    ``tau_scale`` multiplies every tau_j in p; values other than 1 give a
    deliberately wrong table, used to show that the residual check fails.
    """
    p = det_p(problem.A, problem.B, problem.spec)
    if tau_scale != 1.0:
        p = GenSeries(p.nus, {(ell, k): c * tau_scale ** sum(k) for (ell, k), c in p.terms.items()})
    j0, key, _, tail = normalize_leading(p)
    return j0, key.value, extract_markers(log_expand(tail, ximax, lmax))


def asymptotic_residual(problem: ModelProblem, xs, ximax: float = DEFAULT_XIMAX, lmax: int = DEFAULT_LMAX,
                        tau_scale: float = 1.0) -> ResidualTable:
    """r(x) = d/dx log F(ix) - q R - (asymptotic terms built from the c-table).

    Alongside r the table holds the analytic prediction of r (see
    :func:`predicted_residual`), the truncation estimate of the c-table sum,
    and the decay exponent a of a least-squares fit |r| ~ x^{-a}.
    """
    s = problem.spec
    j0, alpha0, ctable = asymptotic_ctable(problem, ximax, lmax, tau_scale)
    _, _, extended = asymptotic_ctable(problem, ximax + EXTEND_XI, lmax + EXTEND_L, tau_scale)
    res, pred, trunc = [], [], []
    for x in xs:
        d = dlog_F_ix(problem, x)
        res.append(d - s.q * s.R - asymptotic_terms(ctable, j0, s.q0, x))
        pred.append(predicted_residual(problem, alpha0, x))
        trunc.append(truncation_estimate(ctable, extended, j0, s.q0, x))
    absr = np.abs(np.array(res))
    xs_arr = np.asarray(list(xs), dtype=float)
    ok = absr > 0
    if np.sum(ok) >= 2:
        slope = float(np.polyfit(np.log(xs_arr[ok]), np.log(absr[ok]), 1)[0])
    else:
        slope = math.nan
    return ResidualTable(tuple(float(x) for x in xs_arr), tuple(res), tuple(pred), tuple(trunc), -slope)


# ---------------------------------------------------------------------------
# log-weight integral


def verify_logint(c: float, s: float, k: int, t0: float) -> tuple[float, float, float]:
    r"""Check int_{t0}^inf x^{-2s-1} (c - log x)^{-k} dx = (-1)^k e^{-2sc} C^{1-k} Ei_k(2 s C).

    C = log t0 - c must be positive.  The left side is adaptive quadrature,
    the right side our own generalized exponential integral.
    """
    C = math.log(t0) - c
    if C <= 0:
        raise ValueError("need log t0 > c")
    if s <= 0 or k < 1:
        raise ValueError("need s > 0 and k >= 1")

    def integrand(x):
        return x ** (-2.0 * s - 1.0) * (c - math.log(x)) ** (-k)

    val, err, info = integrate.quad(integrand, t0, np.inf, epsabs=1e-15, epsrel=1e-13, limit=500, full_output=1)[:3]
    if err > 1e-9 * max(1.0, abs(val)):
        raise RuntimeError(f"quadrature did not converge (error estimate {err:.2e})")
    rhs = (-1) ** k * math.exp(-2.0 * s * c) * C ** (1 - k) * expint_k(k, 2.0 * s * C)
    return val, rhs, abs(val - rhs)

