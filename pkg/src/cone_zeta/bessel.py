r"""Special functions on the real axis.

Bessel functions :math:`J_v` (|v| < 1), :math:`Y_0`, :math:`I_v`, :math:`K_0`,
the logarithmic solution

.. math::
    \tilde J_0(\mu, r) = \frac{\pi}{2} Y_0(\mu r) - (\log\mu - \log 2 + \gamma) J_0(\mu r),

the constant :math:`\tau(\nu) = 2^{2\nu}\Gamma(1+\nu)/\Gamma(1-\nu)`, Gamma by two
independent routes, and the exponential integrals
:math:`\mathrm{Ei}_k(z) = \int_1^\infty e^{-zu} u^{-k}\,du`.

The inner loops live in :mod:`cone_zeta.kernels` (compiled when available).
Routes switch at ``Z_SERIES = 12`` (ascending series below), use backward
recurrence up to ``Z_ASYMPTOTIC = 20`` and Hankel asymptotics beyond.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels as _k

EULER_GAMMA = 0.57721566490153286061
GAMMA_TILDE = math.log(2.0) - EULER_GAMMA

#: above this argument ``bessel_i`` returns ``log I_v(x)`` instead of the value
X_BIG = 700.0

_ROUTES = {
    "auto": _k.AUTO,
    "series": _k.SERIES,
    "recurrence": _k.RECURRENCE,
    "asymptotic": _k.ASYMPTOTIC,
    "closed-half-integer": _k.CLOSED,
    "quadrature": _k.QUADRATURE,
}


@dataclass(frozen=True)
class BesselEval:
    """A special-function value with the route that produced it.

    ``log_scaled`` is set when ``value`` holds the natural log of the function
    (overflow guard for large arguments).
    """

    value: float
    method: str
    est_error: float
    log_scaled: bool = False


def _route(name: str) -> int:
    try:
        return _ROUTES[name]
    except KeyError:
        raise ValueError(f"unknown route {name!r}; expected one of {sorted(_ROUTES)}") from None


def _check_order(v: float) -> None:
    if not -1.0 < v < 1.0:
        raise ValueError(f"order v={v} outside (-1, 1)")


def gamma(x: float) -> float:
    """Gamma function (Lanczos approximation, g=7, 9 terms)."""
    return _k.gamma(float(x))


_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)


def gamma_stirling(x: float) -> float:
    """Gamma function by the shifted Stirling series.

    Independent of :func:`gamma`; used to cross-check it.  Valid for x > 0.
    """
    if x <= 0.0:
        raise ValueError("gamma_stirling needs x > 0")
    shift = 1.0
    while x < 15.0:
        shift *= x
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    corr = 0.0
    power = inv
    for c in _STIRLING:
        corr += c * power
        power *= inv2
    lg = (x - 0.5) * math.log(x) - x + 0.5 * math.log(2.0 * math.pi) + corr
    return math.exp(lg) / shift


def tau(nu: float, method: str = "lanczos") -> float:
    r"""The constant :math:`2^{2\nu}\Gamma(1+\nu)/\Gamma(1-\nu)` for 0 < nu < 1."""
    if not 0.0 < nu < 1.0:
        raise ValueError(f"nu={nu} outside (0, 1)")
    if method not in ("lanczos", "stirling"):
        raise ValueError(f"unknown gamma method {method!r}")
    g = gamma if method == "lanczos" else gamma_stirling
    return 4.0**nu * g(1.0 + nu) / g(1.0 - nu)


def bessel_j(v: float, z: float, route: str = "auto") -> BesselEval:
    """Bessel function of the first kind J_v(z), |v| < 1, z > 0."""
    _check_order(v)
    if z <= 0.0:
        raise ValueError("bessel_j needs z > 0")
    s, err, used = _k.jnorm(float(v), float(z), _route(route))
    scale = (0.5 * z) ** v / gamma(1.0 + v)
    return BesselEval(s * scale, _k.ROUTE_NAMES[used], err * scale)


def bessel_y0(z: float, route: str = "auto") -> BesselEval:
    """Bessel function of the second kind Y_0(z), z > 0."""
    if z <= 0.0:
        raise ValueError("bessel_y0 needs z > 0")
    r = _route(route)
    w, ew, used = _k.wfun(float(z), r)
    j, ej, _ = _k.jnorm(0.0, float(z), r)
    lg = math.log(z) - GAMMA_TILDE
    val = 2.0 / math.pi * (w + lg * j)
    return BesselEval(val, _k.ROUTE_NAMES[used], 2.0 / math.pi * (ew + abs(lg) * ej))


def jtilde0(mu: float, r: float, route: str = "auto") -> BesselEval:
    r"""The logarithmic solution :math:`\tilde J_0(\mu r)` at scale ``mu``.

    Routes: ``"y0"`` evaluates the defining combination of :math:`Y_0` and
    :math:`J_0`; ``"series"`` uses
    :math:`(\log r) J_0(\mu r) - \sum_k H_k (-\tfrac14 (\mu r)^2)^k/(k!)^2`;
    ``"auto"`` picks the kernel route by argument.  Only ``mu**2`` enters, so
    negative ``mu`` is accepted.
    """
    if r <= 0.0:
        raise ValueError("jtilde0 needs r > 0")
    z = abs(mu) * r
    if route == "y0":
        if z == 0.0:
            raise ValueError("the Y_0 route needs mu != 0")
        y = bessel_y0(z)
        j = bessel_j(0.0, z)
        lg = math.log(abs(mu)) - GAMMA_TILDE
        val = 0.5 * math.pi * y.value - lg * j.value
        return BesselEval(val, y.method, 0.5 * math.pi * y.est_error + abs(lg) * j.est_error)
    kr = _k.SERIES if route == "series" else _route(route)
    w, ew, used = _k.wfun(z, kr)
    j, ej, _ = _k.jnorm(0.0, z, kr)
    lr = math.log(r)
    return BesselEval(w + lr * j, _k.ROUTE_NAMES[used], ew + abs(lr) * ej)


def bessel_i(v: float, x: float, route: str = "auto") -> BesselEval:
    """Modified Bessel function I_v(x), |v| < 1, x > 0.

    For x > ``X_BIG`` the natural log of the value is returned with
    ``log_scaled=True``.
    """
    _check_order(v)
    if x <= 0.0:
        raise ValueError("bessel_i needs x > 0")
    s, err, used = _k.inorm_scaled(float(v), float(x), _route(route))
    log_scale = x + v * math.log(0.5 * x) - math.log(gamma(1.0 + v))
    if x > X_BIG:
        return BesselEval(log_scale + math.log(s), _k.ROUTE_NAMES[used], err / s, True)
    scale = math.exp(log_scale)
    return BesselEval(s * scale, _k.ROUTE_NAMES[used], err * scale)


def bessel_k0(x: float, route: str = "auto") -> BesselEval:
    """Modified Bessel function K_0(x), x > 0."""
    if x <= 0.0:
        raise ValueError("bessel_k0 needs x > 0")
    s, err, used = _k.k0_scaled(float(x), _route(route))
    scale = math.exp(-x)
    return BesselEval(s * scale, _k.ROUTE_NAMES[used], err * scale)


def digamma_int(k: int) -> float:
    """psi(k) = -gamma + H_{k-1} for a positive integer k."""
    return -EULER_GAMMA + math.fsum(1.0 / i for i in range(1, k))


def expint_k(k: int, z: float) -> float:
    r"""Generalized exponential integral :math:`\int_1^\infty e^{-zu}u^{-k}\,du`.

    Ascending series with the :math:`\psi(k)` term for z <= 1, continued
    fraction (modified Lentz) for z > 1.
    """
    if k < 1 or int(k) != k:
        raise ValueError("k must be a positive integer")
    if z <= 0.0:
        raise ValueError("expint_k needs z > 0")
    k = int(k)
    if z > 1.0:
        tiny = 1e-300
        b = z + k
        c = 1.0 / tiny
        d = 1.0 / b
        h = d
        for i in range(1, 10000):
            a = -i * (k - 1.0 + i)
            b += 2.0
            d = 1.0 / (a * d + b)
            c = b + a / c
            delta = c * d
            h *= delta
            if abs(delta - 1.0) < 4e-16:
                break
        return h * math.exp(-z)
    total = 1.0 / (k - 1) if k > 1 else -math.log(z) - EULER_GAMMA
    fact = 1.0
    for i in range(1, 10000):
        fact *= -z / i
        if i != k - 1:
            delta = -fact / (i - k + 1)
        else:
            delta = fact * (-math.log(z) + digamma_int(k))
        total += delta
        if abs(delta) < abs(total) * 1e-17:
            break
    return total
