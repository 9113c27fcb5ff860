"""Pure-Python Bessel kernels.

Reference implementation of the hot special-function loops.  The compiled
module ``_kernels`` mirrors every function here one for one; ``kernels``
selects whichever backend is importable.

All order-``v`` functions are returned in the normalized, even form

    S_v(z)   = Gamma(1+v) (z/2)^(-v) J_v(z)     = sum_k (-z^2/4)^k / (k! (1+v)_k)
    S^I_v(z) = Gamma(1+v) (z/2)^(-v) I_v(z)     = sum_k ( z^2/4)^k / (k! (1+v)_k)

which are entire in z^2, equal 1 at z = 0 and stay finite for v in (-1, 1).
The logarithmic companions are

    W(z)   = (pi/2) Y_0(z) - (log z - log 2 + gamma) J_0(z)
    W_I(z) = -(log z - log 2 + gamma) I_0(z) - K_0(z)

both even power series without a logarithm.  Modified functions are scaled by
exp(-z) (and K_0 by exp(z)) so that large arguments never overflow.

Every scalar routine returns ``(value, est_error, route)``.
"""

import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061
GAMMA_TILDE = math.log(2.0) - EULER_GAMMA

AUTO, SERIES, RECURRENCE, ASYMPTOTIC, CLOSED, QUADRATURE = range(6)

Z_SERIES = 12.0
Z_ASYMPTOTIC = 20.0
Z_K0_SERIES = 2.0

_EPS = 2.220446049250313e-16
_MAX_TERMS = 2000

_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x):
    """Gamma function by the g=7, n=9 Lanczos approximation."""
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, 9):
        acc += _LANCZOS[i] / (x + i)
    t = x + 7.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def _ascending(v, z, sign):
    # sum_k (sign z^2/4)^k / (k! (1+v)_k)
    x = sign * 0.25 * z * z
    term = 1.0
    total = 1.0
    mag = 1.0
    k = 0
    while k < _MAX_TERMS:
        k += 1
        term *= x / (k * (k + v))
        total += term
        mag += abs(term)
        if abs(term) <= 1e-17 * mag and k > 0.5 * z:
            break
    return total, 4.0 * _EPS * mag


def _log_ascending(z, sign):
    # sum_{k>=1} H_k (sign z^2/4)^k / (k!)^2
    x = sign * 0.25 * z * z
    term = 1.0
    harmonic = 0.0
    total = 0.0
    mag = 0.0
    k = 0
    while k < _MAX_TERMS:
        k += 1
        term *= x / (k * k)
        harmonic += 1.0 / k
        piece = harmonic * term
        total += piece
        mag += abs(piece)
        if abs(piece) <= 1e-17 * mag and k > 0.5 * z:
            break
    return total, 4.0 * _EPS * mag


def _miller(v, z):
    # Backward recurrence for J_{v+n}(z), normalized by
    # (z/2)^v = sum_k (v+2k) Gamma(v+k)/k! J_{v+2k}(z).
    # Returns S_v(z) and, for v = 0, W(z) = -2 sum_{k>=1} (-1)^k J_{2k}(z)/k.
    half = int(0.7 * z) + 20
    top = 2 * half
    weights = [1.0]
    r = 1.0
    for k in range(1, half + 1):
        if k > 1:
            r *= (v + k - 1) / k
        weights.append((v + 2 * k) * r)
    f_up = 0.0
    f = 1e-30
    norm = 0.0
    mag = 0.0
    wsum = 0.0
    n = top
    while True:
        if n % 2 == 0:
            k = n // 2
            norm += weights[k] * f
            mag += abs(weights[k] * f)
            if k >= 1:
                wsum += (f if k % 2 == 0 else -f) / k
        if n == 0:
            break
        f_down = 2.0 * (v + n) / z * f - f_up
        f_up = f
        f = f_down
        n -= 1
        if abs(f) > 1e250:
            f *= 1e-250
            f_up *= 1e-250
            norm *= 1e-250
            mag *= 1e-250
            wsum *= 1e-250
    s = f / norm
    w = -2.0 * wsum / norm
    err = 8.0 * _EPS * mag / abs(norm) * (1.0 + abs(s))
    return s, w, err


def _hankel(v, z, alternate):
    # P, Q of the Hankel expansion, or the alternating single sum used for
    # I_v (alternate=1) / the plain sum used for K_v (alternate=2).
    mu4 = 4.0 * v * v
    u = 1.0
    p = 1.0
    q = 0.0
    k = 0
    while k < _MAX_TERMS:
        k += 1
        un = u * (mu4 - (2 * k - 1) ** 2) / (8.0 * k * z)
        if abs(un) > abs(u):
            break
        u = un
        if alternate == 1:
            p += -u if k % 2 else u
        elif alternate == 2:
            p += u
        else:
            m = k % 4
            if m == 1:
                q += u
            elif m == 2:
                p -= u
            elif m == 3:
                q -= u
            else:
                p += u
        if abs(u) < 1e-17:
            break
    return p, q, abs(u) + 4.0 * _EPS


def _hankel_jy(v, z):
    p, q, err = _hankel(v, z, 0)
    amp = math.sqrt(2.0 / (math.pi * z))
    phase = (0.5 * v + 0.25) * math.pi
    c = math.cos(z) * math.cos(phase) + math.sin(z) * math.sin(phase)
    s = math.sin(z) * math.cos(phase) - math.cos(z) * math.sin(phase)
    j = amp * (p * c - q * s)
    y = amp * (p * s + q * c)
    return j, y, amp * err


def _pick(v, z, route):
    if route != AUTO:
        return route
    if v == 0.5 or v == -0.5:
        return CLOSED
    if z <= Z_SERIES:
        return SERIES
    if z <= Z_ASYMPTOTIC:
        return RECURRENCE
    return ASYMPTOTIC


def jnorm(v, z, route=AUTO):
    """S_v(z) = Gamma(1+v) (z/2)^(-v) J_v(z) for z >= 0."""
    z = abs(z)
    route = _pick(v, z, route)
    if z == 0.0:
        return 1.0, 0.0, SERIES
    if route == CLOSED:
        if v == 0.5:
            return math.sin(z) / z, _EPS, CLOSED
        if v == -0.5:
            return math.cos(z), _EPS, CLOSED
        raise ValueError("closed form exists only for v = +-1/2")
    if route == SERIES:
        s, err = _ascending(v, z, -1.0)
        return s, err, SERIES
    if route == RECURRENCE:
        s, _, err = _miller(v, z)
        return s, err, RECURRENCE
    if route == ASYMPTOTIC:
        j, _, err = _hankel_jy(v, z)
        scale = gamma(1.0 + v) * (2.0 / z) ** v
        return scale * j, scale * err, ASYMPTOTIC
    raise ValueError("unknown route %r" % route)


def wfun(z, route=AUTO):
    """W(z) = (pi/2) Y_0(z) - (log z - log 2 + gamma) J_0(z)."""
    z = abs(z)
    route = _pick(0.0, z, route)
    if z == 0.0:
        return 0.0, 0.0, SERIES
    if route == SERIES:
        s, err = _log_ascending(z, -1.0)
        return -s, err, SERIES
    if route == RECURRENCE:
        _, w, err = _miller(0.0, z)
        return w, err * (1.0 + math.log(1.0 + z)), RECURRENCE
    if route == ASYMPTOTIC:
        j, y, err = _hankel_jy(0.0, z)
        w = 0.5 * math.pi * y - (math.log(z) - GAMMA_TILDE) * j
        return w, err * (2.0 + abs(math.log(z))), ASYMPTOTIC
    raise ValueError("unknown route %r" % route)


def inorm_scaled(v, z, route=AUTO):
    """exp(-z) S^I_v(z) = exp(-z) Gamma(1+v) (z/2)^(-v) I_v(z) for z >= 0."""
    z = abs(z)
    if route == AUTO:
        if v == 0.5 or v == -0.5:
            route = CLOSED
        elif z <= Z_ASYMPTOTIC:
            route = SERIES
        else:
            route = ASYMPTOTIC
    if z == 0.0:
        return 1.0, 0.0, SERIES
    if route == CLOSED:
        e2 = math.exp(-2.0 * z)
        if v == 0.5:
            return -math.expm1(-2.0 * z) / (2.0 * z), _EPS, CLOSED
        if v == -0.5:
            return 0.5 * (1.0 + e2), _EPS, CLOSED
        raise ValueError("closed form exists only for v = +-1/2")
    if route == SERIES:
        s, err = _ascending(v, z, 1.0)
        scale = math.exp(-z)
        return s * scale, err * scale, SERIES
    if route == ASYMPTOTIC:
        p, _, err = _hankel(v, z, 1)
        scale = gamma(1.0 + v) * (2.0 / z) ** v / math.sqrt(2.0 * math.pi * z)
        return scale * p, scale * err, ASYMPTOTIC
    raise ValueError("unknown route %r" % route)


def k0_scaled(z, route=AUTO):
    """exp(z) K_0(z) for z > 0."""
    if route == AUTO:
        if z <= Z_K0_SERIES:
            route = SERIES
        elif z <= Z_ASYMPTOTIC:
            route = QUADRATURE
        else:
            route = ASYMPTOTIC
    if route == SERIES:
        i0, e1 = _ascending(0.0, z, 1.0)
        h, e2 = _log_ascending(z, 1.0)
        lg = math.log(0.5 * z) + EULER_GAMMA
        val = -lg * i0 + h
        scale = math.exp(z)
        return val * scale, (abs(lg) * e1 + e2 + _EPS * abs(lg * i0)) * scale, SERIES
    if route == QUADRATURE:
        # trapezoid rule on int_0^inf exp(-z (cosh t - 1)) dt; the integrand is
        # analytic in a strip so the error decays like exp(-2 pi d / h)
        h = 0.1
        total = 0.5
        n = 0
        while n < 100000:
            n += 1
            term = math.exp(-z * (math.cosh(n * h) - 1.0))
            total += term
            if term < 1e-18:
                break
        return h * total, 8.0 * _EPS * h * total, QUADRATURE
    if route == ASYMPTOTIC:
        p, _, err = _hankel(0.0, z, 2)
        scale = math.sqrt(0.5 * math.pi / z)
        return scale * p, scale * err, ASYMPTOTIC
    raise ValueError("unknown route %r" % route)


def wi_scaled(z, route=AUTO):
    """exp(-z) W_I(z) with W_I(z) = -(log z - log 2 + gamma) I_0(z) - K_0(z)."""
    z = abs(z)
    if route == AUTO:
        route = SERIES if z <= Z_ASYMPTOTIC else ASYMPTOTIC
    if z == 0.0:
        return 0.0, 0.0, SERIES
    if route == SERIES:
        s, err = _log_ascending(z, 1.0)
        scale = math.exp(-z)
        return -s * scale, err * scale, SERIES
    if route == ASYMPTOTIC:
        i0, e1, _ = inorm_scaled(0.0, z, ASYMPTOTIC)
        k0, e2, _ = k0_scaled(z, ASYMPTOTIC)
        lg = math.log(z) - GAMMA_TILDE
        e2z = math.exp(-2.0 * z)
        return -lg * i0 - k0 * e2z, abs(lg) * e1 + e2 * e2z, ASYMPTOTIC
    raise ValueError("unknown route %r" % route)


def real_entries(nus, q0, radius, mus):
    """Diagonal entries of the blocks J+(mu), J-(mu) for every mu.

    Returns two float arrays of shape (len(mus), q0 + len(nus)).
    """
    nus = [float(v) for v in nus]
    mus = np.asarray(mus, dtype=float)
    q = q0 + len(nus)
    jp = np.empty((mus.size, q))
    jm = np.empty((mus.size, q))
    log_r = math.log(radius)
    rpow = [(radius ** v, radius ** (-v)) for v in nus]
    for i, mu in enumerate(mus.ravel()):
        z = abs(mu) * radius
        if q0:
            j0 = jnorm(0.0, z)[0]
            jt = wfun(z)[0] + log_r * j0
            jp[i, :q0] = j0
            jm[i, :q0] = jt
        for j, v in enumerate(nus):
            jp[i, q0 + j] = rpow[j][0] * jnorm(v, z)[0]
            jm[i, q0 + j] = rpow[j][1] * jnorm(-v, z)[0]
    return jp, jm


def imag_entries(nus, q0, radius, xs):
    """exp(-x R) times the entries of the blocks at mu = i x.

    Returns two float arrays of shape (len(xs), q0 + len(nus)).
    """
    nus = [float(v) for v in nus]
    xs = np.asarray(xs, dtype=float)
    q = q0 + len(nus)
    ip = np.empty((xs.size, q))
    im = np.empty((xs.size, q))
    log_r = math.log(radius)
    rpow = [(radius ** v, radius ** (-v)) for v in nus]
    for i, x in enumerate(xs.ravel()):
        z = abs(x) * radius
        if q0:
            i0 = inorm_scaled(0.0, z)[0]
            jt = wi_scaled(z)[0] + log_r * i0
            ip[i, :q0] = i0
            im[i, :q0] = jt
        for j, v in enumerate(nus):
            ip[i, q0 + j] = rpow[j][0] * inorm_scaled(v, z)[0]
            im[i, q0 + j] = rpow[j][1] * inorm_scaled(-v, z)[0]
    return ip, im
