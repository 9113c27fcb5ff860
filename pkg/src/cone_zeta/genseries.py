r"""Generalized polynomials :math:`\sum c\, x^\ell y^{2\xi}`.

Exponents :math:`\xi = \sum_j k_j \nu_j` are carried exactly as integer vectors
``kvec`` over the basis :math:`\nu_1, \dots, \nu_{q_1}`; ``x`` carries integer
powers.  Keys whose numerical values agree to ``MERGE_TOL`` are merged into one
bucket (rationally dependent exponents), represented by the lexicographically
smallest kvec.

After the leading monomial is factored out, kvecs of the remaining terms are
differences of nonnegative vectors and may have negative entries; only the
value :math:`\xi` is required to be nonnegative.

The pipeline for the determinant polynomial is::

    p = det_p(A, B, spec)                    # exact expansion in x, y
    j0, alpha0, a, tail = normalize_leading(p)
    table = extract_markers(log_expand(tail, ximax, lmax))
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .bessel import GAMMA_TILDE, tau
from .symplectic import SpectralSpec, as_block

MERGE_TOL = 1e-9
DROP_REL = 1e-14
#: coefficients smaller than this fraction of the summed magnitudes that
#: produced them are treated as cancelled
CANCEL_REL = 1e-12
#: determinant coefficients below this fraction of their Hadamard bound are zero
DET_REL = 1e-13

DEFAULT_XIMAX = 6.0
DEFAULT_LMAX = 12

Kvec = tuple[int, ...]
Key = tuple[int, Kvec]


class DegenerateDeterminantError(ValueError):
    """The determinant polynomial p(x, y) vanishes identically."""


class PreconditionError(ValueError):
    """A series argument violates an operation's precondition."""


@dataclass(frozen=True, order=True)
class ExponentKey:
    """An exponent xi = sum k_j nu_j with its integer coordinates."""

    value: float
    kvec: Kvec

    @classmethod
    def of(cls, kvec: Kvec, nus) -> "ExponentKey":
        return cls(xi_value(kvec, nus), tuple(kvec))


def xi_value(kvec: Kvec, nus) -> float:
    return math.fsum(k * v for k, v in zip(kvec, nus))


class GenSeries:
    """Finite table of terms c x^ell y^(2 xi), keyed by (ell, kvec)."""

    def __init__(self, nus, terms=None, ximax: float = math.inf, lmax: float = math.inf):
        self.nus = tuple(float(v) for v in nus)
        self.terms: dict[Key, complex] = {}
        self.ximax = ximax
        self.lmax = lmax
        for (ell, kvec), c in (terms or {}).items():
            if c != 0:
                self.terms[(int(ell), tuple(int(k) for k in kvec))] = complex(c)

    # construction helpers
    @classmethod
    def monomial(cls, nus, ell: int, kvec: Kvec, c: complex = 1.0) -> "GenSeries":
        return cls(nus, {(ell, tuple(kvec)): c})

    def zero_kvec(self) -> Kvec:
        return (0,) * len(self.nus)

    def copy(self) -> "GenSeries":
        out = GenSeries(self.nus, ximax=self.ximax, lmax=self.lmax)
        out.terms = dict(self.terms)
        return out

    def xi(self, kvec: Kvec) -> float:
        return xi_value(kvec, self.nus)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        parts = [f"{c:.6g}*x^{ell}*y^(2*{self.xi(k):.6g})" for (ell, k), c in sorted(self.terms.items())]
        return "GenSeries(" + (" + ".join(parts) if parts else "0") + ")"

    # arithmetic
    def __add__(self, other: "GenSeries") -> "GenSeries":
        out = self.copy()
        for key, c in other.terms.items():
            out.terms[key] = out.terms.get(key, 0.0) + c
        out.terms = {k: c for k, c in out.terms.items() if c != 0}
        return out

    def scaled(self, factor: complex) -> "GenSeries":
        out = self.copy()
        out.terms = {k: c * factor for k, c in self.terms.items() if c * factor != 0}
        return out

    def __mul__(self, other: "GenSeries") -> "GenSeries":
        out: dict[Key, complex] = {}
        for (l1, k1), c1 in self.terms.items():
            for (l2, k2), c2 in other.terms.items():
                key = (l1 + l2, tuple(a + b for a, b in zip(k1, k2)))
                out[key] = out.get(key, 0.0) + c1 * c2
        res = GenSeries(self.nus, ximax=min(self.ximax, other.ximax), lmax=min(self.lmax, other.lmax))
        res.terms = {k: c for k, c in out.items() if c != 0}
        return res

    def evaluate(self, x: complex, y: complex) -> complex:
        """Numerical value at (x, y); y must be positive for non-integer powers."""
        return complex(sum(c * x**ell * y ** (2.0 * self.xi(k)) for (ell, k), c in self.terms.items()))

    # bucket handling
    def buckets(self) -> list[tuple[float, Kvec]]:
        """Distinct numerical exponents, ascending, with their representative kvec."""
        seen = {}
        for _, k in self.terms:
            seen.setdefault(k, self.xi(k))
        return _group(seen)

    def merged(self, magnitudes: dict[Key, float] | None = None, drop: bool = True) -> "GenSeries":
        """Merge numerically equal exponents and drop negligible coefficients.

        A coefficient is dropped when it is below ``DROP_REL`` times the
        largest one in its xi bucket, or, if ``magnitudes`` is given, below
        ``CANCEL_REL`` times the summed magnitude that produced it.  With
        ``drop=False`` only exact zeros are removed.
        """
        values = {}
        for _, k in self.terms:
            values.setdefault(k, self.xi(k))
        rep = {}
        for xi, r, members in _group_members(values):
            for m in members:
                rep[m] = r
        out: dict[Key, complex] = {}
        mags: dict[Key, float] = {}
        for (ell, k), c in self.terms.items():
            key = (ell, rep[k])
            out[key] = out.get(key, 0.0) + c
            if magnitudes is not None:
                mags[key] = mags.get(key, 0.0) + magnitudes.get((ell, k), abs(c))
        bucket_max: dict[Kvec, float] = {}
        for (ell, k), c in out.items():
            bucket_max[k] = max(bucket_max.get(k, 0.0), abs(c))
        res = GenSeries(self.nus, ximax=self.ximax, lmax=self.lmax)
        for key, c in out.items():
            if c == 0 or (drop and abs(c) < DROP_REL * bucket_max[key[1]]):
                continue
            if magnitudes is not None and abs(c) <= CANCEL_REL * mags[key]:
                continue
            res.terms[key] = c
        return res


def _group_members(values: dict[Kvec, float]):
    order = sorted(values.items(), key=lambda kv: (kv[1], kv[0]))
    groups = []
    for k, v in order:
        if groups and v - groups[-1][0][-1] < MERGE_TOL:
            groups[-1][0].append(v)
            groups[-1][1].append(k)
        else:
            groups.append(([v], [k]))
    return [(vals[0], min(ks), ks) for vals, ks in groups]


def _group(values: dict[Kvec, float]) -> list[tuple[float, Kvec]]:
    return [(xi, rep) for xi, rep, _ in _group_members(values)]


# ---------------------------------------------------------------------------
# determinant polynomial


def _hadamard(m: np.ndarray) -> float:
    return float(np.prod(np.linalg.norm(m, axis=0)))


def det_p(A, B, spec: SpectralSpec) -> GenSeries:
    r"""Expand p(x, y) = det[[A, B], [D, Id]], D = diag(x Id_q0, tau_j y^{2 nu_j}).

    By the Schur complement p = det(A - B D); column i of A - B D is
    A_i - d_i B_i, so multilinearity gives a sum over column subsets S of
    (-1)^{|S|} prod_{i in S} d_i times det(columns B_i for i in S, A_i else).
    """
    q, q0 = spec.q, spec.q0
    a = as_block(A, q, "A")
    b = as_block(B, q, "B")
    taus = [tau(v) for v in spec.nus]
    terms: dict[Key, complex] = {}
    for mask in range(1 << q):
        cols = [i for i in range(q) if mask >> i & 1]
        m = a.copy()
        m[:, cols] = b[:, cols]
        d = complex(np.linalg.det(m))
        if d == 0 or abs(d) <= DET_REL * _hadamard(m):
            continue
        ell = sum(1 for i in cols if i < q0)
        kvec = tuple(1 if (q0 + j) in cols else 0 for j in range(spec.q1))
        coef = (-1) ** len(cols) * d
        for j, k in enumerate(kvec):
            if k:
                coef *= taus[j]
        key = (ell, kvec)
        terms[key] = terms.get(key, 0.0) + coef
    return GenSeries(spec.nus, terms).merged()


def substituted_det(A, B, spec: SpectralSpec, x: float, y: float) -> complex:
    """Numerical determinant of the 2q x 2q matrix with x, y substituted."""
    q, q0 = spec.q, spec.q0
    a = as_block(A, q, "A")
    b = as_block(B, q, "B")
    diag = [x] * q0 + [tau(v) * y ** (2.0 * v) for v in spec.nus]
    full = np.block([[a, b], [np.diag(diag).astype(complex), np.eye(q, dtype=complex)]])
    return complex(np.linalg.det(full))


# ---------------------------------------------------------------------------
# normalization and logarithm


def normalize_leading(p: GenSeries) -> tuple[int, ExponentKey, complex, GenSeries]:
    """Factor out a x^j0 y^(2 alpha0) so that p = a x^j0 y^(2 alpha0) (1 + tail).

    alpha0 is the smallest exponent present (ties broken by kvec), j0 the
    smallest x-power among the terms with that exponent.
    """
    p = p.merged()
    if not p:
        raise DegenerateDeterminantError("degenerate Lagrangian determinant: p(x, y) vanishes")
    alpha_value, alpha_k = p.buckets()[0]
    j0 = min(ell for (ell, k) in p.terms if k == alpha_k)
    a = p.terms[(j0, alpha_k)]
    tail = GenSeries(p.nus)
    for (ell, k), c in p.terms.items():
        if ell == j0 and k == alpha_k:
            continue
        tail.terms[(ell - j0, tuple(x - y for x, y in zip(k, alpha_k)))] = c / a
    tail = tail.merged()
    return j0, ExponentKey(alpha_value, alpha_k), a, tail


@dataclass
class XiEntry:
    """Log-expansion coefficients c_{l,xi} at one exponent xi."""

    xi: float
    kvec: Kvec
    coeffs: dict[int, complex]
    ell_reach: float = math.inf
    p: int | None = None
    ell: int | None = None
    unreliable: bool = False

    def c(self, ell: int) -> complex:
        return self.coeffs.get(ell, 0.0)


@dataclass
class CTable:
    """Table of c_{l,xi}, grouped by exponent, with markers p_xi and l_xi."""

    nus: tuple[float, ...]
    entries: list[XiEntry]
    ximax: float
    lmax: int
    markers_done: bool = False

    @property
    def P(self) -> list[float]:
        return [e.xi for e in self.entries if e.p is not None]

    @property
    def L(self) -> list[float]:
        return [e.xi for e in self.entries if e.ell is not None]

    def entry(self, xi: float) -> XiEntry | None:
        for e in self.entries:
            if abs(e.xi - xi) < MERGE_TOL:
                return e
        return None

    def coeff(self, ell: int, xi: float) -> complex:
        e = self.entry(xi)
        return 0.0 if e is None else e.c(ell)

    def as_series(self) -> GenSeries:
        out = GenSeries(self.nus, ximax=self.ximax, lmax=self.lmax)
        for e in self.entries:
            for ell, c in e.coeffs.items():
                out.terms[(ell, e.kvec)] = c
        return out


@dataclass(frozen=True)
class _TailShape:
    beta_min: float | None  # smallest positive xi in the series
    ell0_min: int | None  # smallest ell among xi = 0 terms
    neg: int  # most negative ell among xi > 0 terms (or 0)
    pos: int  # largest ell among xi > 0 terms (or 0)

    def cap_neg(self, dxi: float) -> int:
        if self.beta_min is None or dxi < 0:
            return 0
        return int(math.floor(dxi / self.beta_min + 1e-9)) * -self.neg

    def reach(self, xi: float) -> float:
        if self.ell0_min is not None:
            return math.inf
        if self.beta_min is None:
            return 0
        return int(math.floor(xi / self.beta_min + 1e-9)) * self.pos

    def max_power(self, ximax: float, lmax: int) -> int:
        n_xi = 0 if self.beta_min is None else int(math.floor(ximax / self.beta_min + 1e-9))
        n_0 = 0
        if self.ell0_min is not None:
            n_0 = int(math.floor((lmax + n_xi * -self.neg) / self.ell0_min))
        return n_xi + n_0


def _shape(s: GenSeries) -> _TailShape:
    pos_xi = [(ell, s.xi(k)) for (ell, k) in s.terms if s.xi(k) >= MERGE_TOL]
    zero_xi = [ell for (ell, k) in s.terms if s.xi(k) < MERGE_TOL]
    return _TailShape(
        beta_min=min((x for _, x in pos_xi), default=None),
        ell0_min=min(zero_xi, default=None),
        neg=min([0] + [ell for ell, _ in pos_xi]),
        pos=max([0] + [ell for ell, _ in pos_xi]),
    )


def _check_constant_free(s: GenSeries, what: str) -> None:
    for (ell, k) in s.terms:
        if s.xi(k) < MERGE_TOL and ell <= 0:
            raise PreconditionError(f"{what} has a term x^{ell} y^0 with ell <= 0 (constant term)")


def _prune(s: GenSeries, shape: _TailShape, ximax: float, lmax: int) -> GenSeries:
    # drop terms that no further multiplication can bring back into range
    out = GenSeries(s.nus, ximax=ximax, lmax=lmax)
    for (ell, k), c in s.terms.items():
        xi = s.xi(k)
        if xi > ximax + MERGE_TOL:
            continue
        if ell - shape.cap_neg(ximax - xi) > lmax:
            continue
        out.terms[(ell, k)] = c
    return out


def _power_sum(s: GenSeries, weights, ximax: float, lmax: int,
               drop: bool = True) -> tuple[GenSeries, dict[Key, float]]:
    """sum_m weights(m) s^m within truncation, plus the magnitude table.

    ``drop=False`` keeps cancellation residue instead of zeroing it.
    """
    shape = _shape(s)
    mmax = shape.max_power(ximax, lmax)
    absval = GenSeries(s.nus, {k: abs(c) for k, c in s.terms.items()})
    power = _prune(s, shape, ximax, lmax)
    apower = _prune(absval, shape, ximax, lmax)
    acc = GenSeries(s.nus, ximax=ximax, lmax=lmax)
    mags: dict[Key, float] = {}
    for m in range(1, mmax + 1):
        if not power:
            break
        w = weights(m)
        acc = acc + power.scaled(w)
        for key, c in apower.terms.items():
            mags[key] = mags.get(key, 0.0) + abs(w) * abs(c)
        if m < mmax:
            power = _prune(power * s, shape, ximax, lmax)
            apower = _prune(apower * absval, shape, ximax, lmax)
    keep = GenSeries(s.nus, ximax=ximax, lmax=lmax)
    for (ell, k), c in acc.terms.items():
        if ell <= lmax and s.xi(k) <= ximax + MERGE_TOL:
            keep.terms[(ell, k)] = c
    if not drop:
        return keep.merged(drop=False), mags
    return keep.merged(mags), mags


def log_expand(tail: GenSeries, ximax: float = DEFAULT_XIMAX, lmax: int = DEFAULT_LMAX,
               drop: bool = True) -> CTable:
    """Coefficients c_{l,xi} of log(1 + tail), truncated to xi <= ximax, l <= lmax.

    log(1 + t) = sum_m (-1)^(m-1) t^m / m.  Negative x-powers are never
    truncated: at fixed xi they are bounded below by the tail's own negative
    powers, so keeping them all makes p_xi exact.  ``drop=False`` keeps
    coefficients that cancel to rounding level.
    """
    _check_constant_free(tail, "tail")
    shape = _shape(tail)
    logs, _ = _power_sum(tail, lambda m: (-1) ** (m - 1) / m, ximax, lmax, drop)
    entries = []
    for xi, rep in logs.buckets():
        coeffs = {ell: c for (ell, k), c in sorted(logs.terms.items()) if k == rep}
        entries.append(XiEntry(xi, rep, coeffs, ell_reach=shape.reach(xi)))
    return CTable(tail.nus, entries, ximax, lmax)


def extract_markers(ct: CTable) -> CTable:
    """Fill p_xi (min l <= 0 with c != 0) and l_xi (min l > 0 with c != 0).

    An entry is flagged unreliable when no positive l was found although the
    tail could produce positive powers beyond ``lmax`` at this xi.
    """
    out = []
    for e in ct.entries:
        nonpos = [ell for ell, c in e.coeffs.items() if ell <= 0 and c != 0]
        pos = [ell for ell, c in e.coeffs.items() if ell > 0 and c != 0]
        p = min(nonpos) if nonpos else None
        ell = min(pos) if pos else None
        unreliable = ell is None and e.ell_reach > ct.lmax
        out.append(replace(e, p=p, ell=ell, unreliable=unreliable))
    return CTable(ct.nus, out, ct.ximax, ct.lmax, markers_done=True)


def exp_expand(series: GenSeries, ximax: float = DEFAULT_XIMAX, lmax: int = DEFAULT_LMAX,
               drop: bool = True) -> GenSeries:
    """exp(series) - 1 within truncation (series must be constant free)."""
    _check_constant_free(series, "series")
    out, _ = _power_sum(series, lambda m: 1.0 / math.factorial(m), ximax, lmax, drop)
    return out


def trusted_window(tail: GenSeries, ximax: float, lmax: int):
    """Predicate (ell, xi) -> bool for coefficients of exp(log(1+tail)) that do
    not depend on log coefficients cut off by the l <= lmax truncation."""
    shape = _shape(tail)

    def inside(ell: int, xi: float) -> bool:
        return xi <= ximax + MERGE_TOL and ell + shape.cap_neg(xi) <= lmax

    return inside


def round_trip_error(tail: GenSeries, ximax: float = DEFAULT_XIMAX, lmax: int = DEFAULT_LMAX) -> float:
    """max |exp(log(1 + tail)) - 1 - tail| over the trusted window.

    Both expansions run without the cancellation drop, so rounding residue
    that would otherwise be zeroed is measured.
    """
    logs = log_expand(tail, ximax, lmax, drop=False).as_series()
    back = exp_expand(logs, ximax, lmax, drop=False)
    inside = trusted_window(tail, ximax, lmax)
    diff = dict(back.terms)
    for key, c in tail.terms.items():
        diff[key] = diff.get(key, 0.0) - c
    worst = 0.0
    for (ell, k), c in diff.items():
        if inside(ell, back.xi(k)):
            worst = max(worst, abs(c))
    return worst


# ---------------------------------------------------------------------------
# the pure -1/4 block


def _trim(coeffs: np.ndarray, scale: float) -> np.ndarray:
    c = np.array(coeffs, dtype=complex)
    c[np.abs(c) <= DET_REL * scale] = 0.0
    nz = np.nonzero(c)[0]
    return c[: nz[-1] + 1] if nz.size else np.zeros(1, dtype=complex)


def poly_p0(A0, B0) -> np.ndarray:
    r"""Coefficients (ascending in z) of det[[A0, B0], [Id, (log 2 - gamma - z) Id]].

    The determinant equals det(w A0 - B0) with w = log 2 - gamma - z; it is
    expanded over column subsets in w and then re-expanded in z.
    """
    a0 = np.atleast_2d(np.asarray(A0, dtype=complex))
    b0 = np.atleast_2d(np.asarray(B0, dtype=complex))
    n = a0.shape[0]
    if n == 0:
        return np.ones(1, dtype=complex)
    in_w = np.zeros(n + 1, dtype=complex)
    scale = 0.0
    for mask in range(1 << n):
        cols = [i for i in range(n) if mask >> i & 1]
        m = -b0.copy()
        m[:, cols] = a0[:, cols]
        d = complex(np.linalg.det(m))
        h = _hadamard(m)
        scale = max(scale, h)
        if abs(d) > DET_REL * h:
            in_w[len(cols)] += d
    # substitute w = GAMMA_TILDE - z
    out = np.zeros(n + 1, dtype=complex)
    for j, c in enumerate(in_w):
        for i in range(j + 1):
            out[i] += c * math.comb(j, i) * GAMMA_TILDE ** (j - i) * (-1) ** i
    return _trim(out, max(scale, 1e-300))


def poly_degree(p0) -> int:
    nz = np.nonzero(np.asarray(p0))[0]
    return int(nz[-1]) if nz.size else -1


def beta_coeffs(p0, K: int) -> np.ndarray:
    """beta_1..beta_K with p0'(z)/p0(z) = sum_k beta_k z^(-k).

    Equating p0(z) sum_k beta_k z^(-k) = p0'(z) at the power z^(d-m) gives
    beta_m = [(d-m+1) p_{d-m+1} - sum_{k<m} p_{d-m+k} beta_k] / p_d.
    """
    p = np.asarray(p0, dtype=complex)
    d = poly_degree(p)
    if d < 0:
        raise PreconditionError("p0 vanishes identically")
    beta = np.zeros(K, dtype=complex)
    if d == 0:
        return beta

    def coef(i: int) -> complex:
        return p[i] if 0 <= i <= d else 0.0

    for m in range(1, K + 1):
        acc = (d - m + 1) * coef(d - m + 1)
        for k in range(1, m):
            acc -= coef(d - m + k) * beta[k - 1]
        beta[m - 1] = acc / p[d]
    return beta


@dataclass
class P1Result:
    p1: GenSeries
    alpha0: ExponentKey
    a: complex
    table: CTable


def poly_p1(A1, B1, spec: SpectralSpec, ximax: float = DEFAULT_XIMAX) -> P1Result:
    """The pure-y determinant p1(y), its normalization and its c_xi table."""
    s1 = SpectralSpec(0, spec.nus, spec.R)
    p1 = det_p(A1, B1, s1)
    j0, alpha0, a, tail = normalize_leading(p1)
    table = extract_markers(log_expand(tail, ximax, 0))
    return P1Result(p1, alpha0, a, table)


__all__ = [
    "CTable",
    "DegenerateDeterminantError",
    "ExponentKey",
    "GenSeries",
    "P1Result",
    "PreconditionError",
    "XiEntry",
    "beta_coeffs",
    "det_p",
    "exp_expand",
    "extract_markers",
    "log_expand",
    "normalize_leading",
    "poly_degree",
    "poly_p0",
    "poly_p1",
    "round_trip_error",
    "substituted_det",
    "trusted_window",
]
