"""Boundary data: spectral spec, Lagrangian matrices, decomposability, angles.

A self-adjoint extension is encoded by complex q x q matrices ``A``, ``B``
acting on the boundary coefficient vector (c, d) in C^{2q}; the extension's
Lagrangian subspace is the null space of the q x 2q block ``(A B)``.  The first
``q0`` coordinates belong to the r^{1/2}, r^{1/2} log r pair of the -1/4
eigenvalue, the remaining ``q1`` to the r^{1/2 -+ nu_j} pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

#: relative singular-value threshold for numerical rank
RANK_TOL = 1e-10
#: singular values within this factor above RANK_TOL trigger a conditioning warning
WARN_FACTOR = 1e4


class InvalidLagrangianError(ValueError):
    """Raised when an operation needs a valid Lagrangian and did not get one."""


@dataclass(frozen=True)
class SpectralSpec:
    """Boundary spectral data.

    Parameters
    ----------
    q0 : int
        Multiplicity of the eigenvalue -1/4 of the cross-section operator.
    nus : sequence of float
        Exponents nu_j in (0, 1), one per remaining critical eigenvalue.
    R : float
        Interval length of the model problem (Dirichlet condition at r = R).
    """

    q0: int
    nus: tuple[float, ...] = ()
    R: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "nus", tuple(float(v) for v in self.nus))
        if int(self.q0) != self.q0 or self.q0 < 0:
            raise ValueError(f"q0 must be a nonnegative integer, got {self.q0}")
        object.__setattr__(self, "q0", int(self.q0))
        for v in self.nus:
            if not 0.0 < v < 1.0:
                raise ValueError(f"every nu must lie in (0, 1), got {v}")
        if self.q0 + len(self.nus) < 1:
            raise ValueError("q0 + q1 must be at least 1")
        if not (self.R > 0.0 and math.isfinite(self.R)):
            raise ValueError(f"R must be positive, got {self.R}")

    @property
    def q1(self) -> int:
        return len(self.nus)

    @property
    def q(self) -> int:
        return self.q0 + len(self.nus)


def as_block(m, q: int, name: str) -> np.ndarray:
    """Coerce ``m`` to a complex q x q array or raise ``ValueError``."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 0 and q == 1:
        arr = arr.reshape(1, 1)
    if arr.shape != (q, q):
        raise ValueError(f"{name} must be {q}x{q}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True)
class Lagrangian:
    """The pair (A, B); the subspace itself is the null space of (A B)."""

    A: np.ndarray
    B: np.ndarray

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.A.imag == 0) and np.all(self.B.imag == 0))


class Verdict(str, Enum):
    OK = "ok"
    RANK_DEFICIENT = "rank_deficient"
    NOT_SELF_ADJOINT = "not_self_adjoint"


@dataclass(frozen=True)
class ValidationResult:
    verdict: Verdict
    rank: int
    asymmetry: float
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.verdict is Verdict.OK


@dataclass(frozen=True)
class DecompositionResult:
    decomposable: bool
    A0: np.ndarray | None = None
    B0: np.ndarray | None = None
    A1: np.ndarray | None = None
    B1: np.ndarray | None = None
    split_angles: list[float] | None = field(default=None)


def _rank(m: np.ndarray, scale: float | None = None) -> tuple[int, np.ndarray]:
    if m.size == 0:
        return 0, np.zeros(0)
    s = np.linalg.svd(m, compute_uv=False)
    ref = s[0] if scale is None else scale
    if ref == 0.0:
        return 0, s
    return int(np.sum(s > RANK_TOL * ref)), s


def null_space(m: np.ndarray, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the null space of ``m``."""
    rows, cols = m.shape
    if rows == 0:
        return np.eye(cols, dtype=complex)
    _, s, vh = np.linalg.svd(m)
    ref = s[0] if scale is None else scale
    rank = int(np.sum(s > RANK_TOL * ref)) if ref > 0 else 0
    return vh[rank:].conj().T


def validate_lagrangian(A, B, spec: SpectralSpec) -> ValidationResult:
    """Check that (A, B) defines a Lagrangian subspace for ``spec``.

    The verdict is ``ok`` iff (A B) has numerical rank q and A'B* is
    self-adjoint, where A' is A with its first q0 columns negated.  Both tests
    use the relative tolerance ``RANK_TOL``.
    """
    q = spec.q
    a = as_block(A, q, "A")
    b = as_block(B, q, "B")
    ab = np.hstack([a, b])
    rank, s = _rank(ab)
    warnings = []
    smax = s[0] if s.size else 0.0
    if smax > 0:
        near = (s > RANK_TOL * smax) & (s < WARN_FACTOR * RANK_TOL * smax)
        if np.any(near) or (rank < q and s[rank] > RANK_TOL * smax / WARN_FACTOR):
            warnings.append(
                "ill-conditioned: singular values %s are close to the rank threshold"
                % ", ".join(f"{x:.3e}" for x in s / smax)
            )
    if rank < q:
        return ValidationResult(Verdict.RANK_DEFICIENT, rank, math.nan, tuple(warnings))
    ap = a.copy()
    ap[:, : spec.q0] *= -1.0
    form = ap @ b.conj().T
    asym = float(np.linalg.norm(form - form.conj().T) / (smax * smax))
    verdict = Verdict.OK if asym <= RANK_TOL else Verdict.NOT_SELF_ADJOINT
    return ValidationResult(verdict, rank, asym, tuple(warnings))


def require_valid(A, B, spec: SpectralSpec) -> Lagrangian:
    """Validate and return the coerced :class:`Lagrangian` or raise."""
    res = validate_lagrangian(A, B, spec)
    if not res.ok:
        raise InvalidLagrangianError(f"invalid Lagrangian: {res.verdict.value}")
    return Lagrangian(as_block(A, spec.q, "A"), as_block(B, spec.q, "B"))


def _block_conditions(basis: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # rows r with r . k = 0 for every column k of ``basis`` (2n x n)
    rows = null_space(basis.T).T
    if rows.shape[0] != n:
        raise InvalidLagrangianError("block does not have the expected dimension")
    return rows[:, :n], rows[:, n:]


def _subspace_in(n_basis: np.ndarray, keep: list[int], drop: list[int]) -> np.ndarray:
    # basis of {N c : (N c)[drop] = 0}, returned in the ``keep`` coordinates
    if not drop:
        return n_basis[keep]
    c = null_space(n_basis[drop], scale=1.0)
    return (n_basis @ c)[keep]


def decompose(A, B, spec: SpectralSpec) -> DecompositionResult:
    """Split L into its -1/4 part and its (0,1)-exponent part when possible.

    L is decomposable iff L = (L cap V0) + (L cap V1), where V0 holds the
    coordinates {1..q0, q+1..q+q0}.  With N an orthonormal null-space basis,
    dim(L cap V0) = q - rank N[V1 rows], so the test is
    rank N[V0 rows] + rank N[V1 rows] = q.
    """
    lag = require_valid(A, B, spec)
    q, q0 = spec.q, spec.q0
    nb = null_space(np.hstack([lag.A, lag.B]))
    i0 = list(range(q0)) + list(range(q, q + q0))
    i1 = list(range(q0, q)) + list(range(q + q0, 2 * q))
    r0 = _rank(nb[i0], scale=1.0)[0] if q0 else 0
    r1 = _rank(nb[i1], scale=1.0)[0] if spec.q1 else 0
    if r0 + r1 != q:
        return DecompositionResult(False)
    empty = np.zeros((0, 0), dtype=complex)
    a0 = b0 = a1 = b1 = empty
    if q0:
        a0, b0 = _block_conditions(_subspace_in(nb, i0, i1), q0)
    if spec.q1:
        a1, b1 = _block_conditions(_subspace_in(nb, i1, i0), spec.q1)
    angles = split_angles(a0, b0) if q0 else None
    return DecompositionResult(True, a0, b0, a1, b1, angles)


def split_angles(A0, B0) -> list[float] | None:
    """Angles theta_l when L0 = sum of L_theta_l over coordinate pairs (l, q0+l).

    Returns ``None`` when the null space of (A0 B0) does not split over the
    coordinate pairs.  Each pair's line {a x + b y = 0} is reported as
    theta in [0, pi) with (cos theta, sin theta) proportional to (a, b); the
    normalization divides (a conj(b), |b|^2) by its length, and b = 0 gives 0.
    """
    a0 = np.atleast_2d(np.asarray(A0, dtype=complex))
    b0 = np.atleast_2d(np.asarray(B0, dtype=complex))
    n = a0.shape[0]
    if n == 0:
        return []
    nb = null_space(np.hstack([a0, b0]))
    if nb.shape[1] != n:
        raise InvalidLagrangianError("(A0 B0) does not have full rank")
    angles = []
    for ell in range(n):
        pair = [ell, n + ell]
        rest = [i for i in range(2 * n) if i not in pair]
        vec = _subspace_in(nb, pair, rest)
        if _rank(vec, scale=1.0)[0] != 1 or vec.shape[1] != 1:
            return None
        k1, k2 = vec[:, 0]
        a, b = k2, -k1
        size = max(abs(a), abs(b))
        if abs(b) <= 1e-12 * size:
            angles.append(0.0)
            continue
        cross = (a * np.conj(b)).real
        theta = math.atan2(abs(b) ** 2, cross)
        if theta >= math.pi:
            theta -= math.pi
        angles.append(theta)
    return angles


def angle_block(thetas) -> tuple[np.ndarray, np.ndarray]:
    """A0 = diag(cos theta), B0 = diag(sin theta)."""
    th = np.asarray(thetas, dtype=float)
    return np.diag(np.cos(th)).astype(complex), np.diag(np.sin(th)).astype(complex)
