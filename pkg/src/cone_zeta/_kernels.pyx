# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Bessel kernels.

C translation of ``_kernels_py``; see that module for the definitions of the
normalized functions S_v, S^I_v, W and W_I.  The array builders release the
GIL so that callers may split a grid over threads.
"""

import numpy as np

from libc.math cimport sin, cos, cosh, exp, expm1, log, sqrt, fabs, pow, M_PI
from libc.stdlib cimport malloc, free

cdef double EULER = 0.57721566490153286061
cdef double GT = 0.69314718055994530942 - 0.57721566490153286061
cdef double EPS = 2.220446049250313e-16
cdef int MAX_TERMS = 2000

EULER_GAMMA = EULER
GAMMA_TILDE = GT

AUTO, SERIES, RECURRENCE, ASYMPTOTIC, CLOSED, QUADRATURE = range(6)
cdef enum:
    C_BAD = -1
    C_AUTO = 0
    C_SERIES = 1
    C_RECURRENCE = 2
    C_ASYMPTOTIC = 3
    C_CLOSED = 4
    C_QUADRATURE = 5

Z_SERIES = 12.0
Z_ASYMPTOTIC = 20.0
Z_K0_SERIES = 2.0
cdef double ZS = 12.0
cdef double ZA = 20.0
cdef double ZK = 2.0

cdef double[9] LANCZOS = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]


cdef double c_gamma(double x) nogil:
    cdef double acc, t
    cdef int i
    if x < 0.5:
        return M_PI / (sin(M_PI * x) * c_gamma(1.0 - x))
    x -= 1.0
    acc = LANCZOS[0]
    for i in range(1, 9):
        acc += LANCZOS[i] / (x + i)
    t = x + 7.5
    return sqrt(2.0 * M_PI) * pow(t, x + 0.5) * exp(-t) * acc


cdef double c_ascending(double v, double z, double sign, double* err) nogil:
    cdef double x = sign * 0.25 * z * z
    cdef double term = 1.0, total = 1.0, mag = 1.0
    cdef int k = 0
    while k < MAX_TERMS:
        k += 1
        term *= x / (k * (k + v))
        total += term
        mag += fabs(term)
        if fabs(term) <= 1e-17 * mag and k > 0.5 * z:
            break
    err[0] = 4.0 * EPS * mag
    return total


cdef double c_log_ascending(double z, double sign, double* err) nogil:
    cdef double x = sign * 0.25 * z * z
    cdef double term = 1.0, harmonic = 0.0, total = 0.0, mag = 0.0, piece
    cdef int k = 0
    while k < MAX_TERMS:
        k += 1
        term *= x / (<double>k * k)
        harmonic += 1.0 / k
        piece = harmonic * term
        total += piece
        mag += fabs(piece)
        if fabs(piece) <= 1e-17 * mag and k > 0.5 * z:
            break
    err[0] = 4.0 * EPS * mag
    return total


cdef int c_miller(double v, double z, double* s_out, double* w_out, double* err) nogil:
    cdef int half = <int>(0.7 * z) + 20
    cdef int top = 2 * half
    cdef double* weights = <double*>malloc((half + 1) * sizeof(double))
    cdef double r = 1.0, f_up = 0.0, f = 1e-30, f_down
    cdef double norm = 0.0, mag = 0.0, wsum = 0.0
    cdef int k, n
    if weights == NULL:
        return -1
    weights[0] = 1.0
    for k in range(1, half + 1):
        if k > 1:
            r *= (v + k - 1) / k
        weights[k] = (v + 2 * k) * r
    n = top
    while True:
        if n % 2 == 0:
            k = n // 2
            norm += weights[k] * f
            mag += fabs(weights[k] * f)
            if k >= 1:
                if k % 2 == 0:
                    wsum += f / k
                else:
                    wsum -= f / k
        if n == 0:
            break
        f_down = 2.0 * (v + n) / z * f - f_up
        f_up = f
        f = f_down
        n -= 1
        if fabs(f) > 1e250:
            f *= 1e-250
            f_up *= 1e-250
            norm *= 1e-250
            mag *= 1e-250
            wsum *= 1e-250
    free(weights)
    s_out[0] = f / norm
    w_out[0] = -2.0 * wsum / norm
    err[0] = 8.0 * EPS * mag / fabs(norm) * (1.0 + fabs(s_out[0]))
    return 0


cdef double c_hankel(double v, double z, int alternate, double* q_out, double* err) nogil:
    cdef double mu4 = 4.0 * v * v
    cdef double u = 1.0, p = 1.0, q = 0.0, un
    cdef int k = 0, m
    while k < MAX_TERMS:
        k += 1
        un = u * (mu4 - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z)
        if fabs(un) > fabs(u):
            break
        u = un
        if alternate == 1:
            if k % 2:
                p -= u
            else:
                p += u
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
        if fabs(u) < 1e-17:
            break
    q_out[0] = q
    err[0] = fabs(u) + 4.0 * EPS
    return p


cdef void c_hankel_jy(double v, double z, double* j, double* y, double* err) nogil:
    cdef double q, e
    cdef double p = c_hankel(v, z, 0, &q, &e)
    cdef double amp = sqrt(2.0 / (M_PI * z))
    cdef double phase = (0.5 * v + 0.25) * M_PI
    cdef double c = cos(z) * cos(phase) + sin(z) * sin(phase)
    cdef double s = sin(z) * cos(phase) - cos(z) * sin(phase)
    j[0] = amp * (p * c - q * s)
    y[0] = amp * (p * s + q * c)
    err[0] = amp * e


cdef int c_pick(double v, double z, int route) nogil:
    if route != C_AUTO:
        return route
    if v == 0.5 or v == -0.5:
        return C_CLOSED
    if z <= ZS:
        return C_SERIES
    if z <= ZA:
        return C_RECURRENCE
    return C_ASYMPTOTIC


cdef double c_jnorm(double v, double z, int route, double* err, int* used) nogil:
    cdef double s, w, j, y, scale
    z = fabs(z)
    route = c_pick(v, z, route)
    if z == 0.0:
        err[0] = 0.0
        used[0] = C_SERIES
        return 1.0
    used[0] = route
    if route == C_CLOSED:
        err[0] = EPS
        if v == 0.5:
            return sin(z) / z
        if v == -0.5:
            return cos(z)
        used[0] = C_BAD
        return 0.0
    if route == C_SERIES:
        return c_ascending(v, z, -1.0, err)
    if route == C_RECURRENCE:
        c_miller(v, z, &s, &w, err)
        return s
    if route == C_ASYMPTOTIC:
        c_hankel_jy(v, z, &j, &y, err)
        scale = c_gamma(1.0 + v) * pow(2.0 / z, v)
        err[0] *= scale
        return scale * j
    used[0] = C_BAD
    return 0.0


cdef double c_wfun(double z, int route, double* err, int* used) nogil:
    cdef double s, w, j, y
    z = fabs(z)
    route = c_pick(0.0, z, route)
    if z == 0.0:
        err[0] = 0.0
        used[0] = C_SERIES
        return 0.0
    used[0] = route
    if route == C_SERIES:
        return -c_log_ascending(z, -1.0, err)
    if route == C_RECURRENCE:
        c_miller(0.0, z, &s, &w, err)
        err[0] *= 1.0 + log(1.0 + z)
        return w
    if route == C_ASYMPTOTIC:
        c_hankel_jy(0.0, z, &j, &y, err)
        err[0] *= 2.0 + fabs(log(z))
        return 0.5 * M_PI * y - (log(z) - GT) * j
    used[0] = C_BAD
    return 0.0


cdef double c_inorm_scaled(double v, double z, int route, double* err, int* used) nogil:
    cdef double s, q, scale
    z = fabs(z)
    if route == C_AUTO:
        if v == 0.5 or v == -0.5:
            route = C_CLOSED
        elif z <= ZA:
            route = C_SERIES
        else:
            route = C_ASYMPTOTIC
    if z == 0.0:
        err[0] = 0.0
        used[0] = C_SERIES
        return 1.0
    used[0] = route
    if route == C_CLOSED:
        err[0] = EPS
        if v == 0.5:
            return -expm1(-2.0 * z) / (2.0 * z)
        if v == -0.5:
            return 0.5 * (1.0 + exp(-2.0 * z))
        used[0] = C_BAD
        return 0.0
    if route == C_SERIES:
        s = c_ascending(v, z, 1.0, err)
        scale = exp(-z)
        err[0] *= scale
        return s * scale
    if route == C_ASYMPTOTIC:
        s = c_hankel(v, z, 1, &q, err)
        scale = c_gamma(1.0 + v) * pow(2.0 / z, v) / sqrt(2.0 * M_PI * z)
        err[0] *= scale
        return scale * s
    used[0] = C_BAD
    return 0.0


cdef double c_k0_scaled(double z, int route, double* err, int* used) nogil:
    cdef double i0, h, e1, e2, lg, val, scale, step, total, term, q
    cdef int n
    if route == C_AUTO:
        if z <= ZK:
            route = C_SERIES
        elif z <= ZA:
            route = C_QUADRATURE
        else:
            route = C_ASYMPTOTIC
    used[0] = route
    if route == C_SERIES:
        i0 = c_ascending(0.0, z, 1.0, &e1)
        h = c_log_ascending(z, 1.0, &e2)
        lg = log(0.5 * z) + EULER
        val = -lg * i0 + h
        scale = exp(z)
        err[0] = (fabs(lg) * e1 + e2 + EPS * fabs(lg * i0)) * scale
        return val * scale
    if route == C_QUADRATURE:
        step = 0.1
        total = 0.5
        n = 0
        while n < 100000:
            n += 1
            term = exp(-z * (cosh(n * step) - 1.0))
            total += term
            if term < 1e-18:
                break
        err[0] = 8.0 * EPS * step * total
        return step * total
    if route == C_ASYMPTOTIC:
        val = c_hankel(0.0, z, 2, &q, err)
        scale = sqrt(0.5 * M_PI / z)
        err[0] *= scale
        return scale * val
    used[0] = C_BAD
    return 0.0


cdef double c_wi_scaled(double z, int route, double* err, int* used) nogil:
    cdef double s, i0, k0, e1, e2, lg, e2z
    cdef int u
    z = fabs(z)
    if route == C_AUTO:
        route = C_SERIES if z <= ZA else C_ASYMPTOTIC
    if z == 0.0:
        err[0] = 0.0
        used[0] = C_SERIES
        return 0.0
    used[0] = route
    if route == C_SERIES:
        s = c_log_ascending(z, 1.0, err)
        err[0] *= exp(-z)
        return -s * exp(-z)
    if route == C_ASYMPTOTIC:
        i0 = c_inorm_scaled(0.0, z, C_ASYMPTOTIC, &e1, &u)
        k0 = c_k0_scaled(z, C_ASYMPTOTIC, &e2, &u)
        lg = log(z) - GT
        e2z = exp(-2.0 * z)
        err[0] = fabs(lg) * e1 + e2 * e2z
        return -lg * i0 - k0 * e2z
    used[0] = C_BAD
    return 0.0


cdef _checked(double value, double err, int used):
    if used == C_BAD:
        raise ValueError("route not available for these arguments")
    return value, err, used


def gamma(double x):
    """Gamma function by the g=7, n=9 Lanczos approximation."""
    return c_gamma(x)


def jnorm(double v, double z, int route=C_AUTO):
    """S_v(z) = Gamma(1+v) (z/2)^(-v) J_v(z) for z >= 0."""
    cdef double err
    cdef int used
    cdef double val = c_jnorm(v, z, route, &err, &used)
    return _checked(val, err, used)


def wfun(double z, int route=C_AUTO):
    """W(z) = (pi/2) Y_0(z) - (log z - log 2 + gamma) J_0(z)."""
    cdef double err
    cdef int used
    cdef double val = c_wfun(z, route, &err, &used)
    return _checked(val, err, used)


def inorm_scaled(double v, double z, int route=C_AUTO):
    """exp(-z) S^I_v(z) = exp(-z) Gamma(1+v) (z/2)^(-v) I_v(z) for z >= 0."""
    cdef double err
    cdef int used
    cdef double val = c_inorm_scaled(v, z, route, &err, &used)
    return _checked(val, err, used)


def k0_scaled(double z, int route=C_AUTO):
    """exp(z) K_0(z) for z > 0."""
    cdef double err
    cdef int used
    cdef double val = c_k0_scaled(z, route, &err, &used)
    return _checked(val, err, used)


def wi_scaled(double z, int route=C_AUTO):
    """exp(-z) W_I(z) with W_I(z) = -(log z - log 2 + gamma) I_0(z) - K_0(z)."""
    cdef double err
    cdef int used
    cdef double val = c_wi_scaled(z, route, &err, &used)
    return _checked(val, err, used)


def real_entries(nus, int q0, double radius, mus):
    """Diagonal entries of the blocks J+(mu), J-(mu) for every mu."""
    cdef double[::1] nu = np.ascontiguousarray(nus, dtype=float)
    cdef double[::1] mu = np.ascontiguousarray(np.ravel(mus), dtype=float)
    cdef Py_ssize_t n = mu.shape[0], q1 = nu.shape[0], i, j
    cdef int q = q0 + <int>q1, used
    jp_arr = np.empty((n, q))
    jm_arr = np.empty((n, q))
    cdef double[:, ::1] jp = jp_arr
    cdef double[:, ::1] jm = jm_arr
    cdef double log_r = log(radius), z, j0, jt, err
    with nogil:
        for i in range(n):
            z = fabs(mu[i]) * radius
            if q0 > 0:
                j0 = c_jnorm(0.0, z, C_AUTO, &err, &used)
                jt = c_wfun(z, C_AUTO, &err, &used) + log_r * j0
                for j in range(q0):
                    jp[i, j] = j0
                    jm[i, j] = jt
            for j in range(q1):
                jp[i, q0 + j] = pow(radius, nu[j]) * c_jnorm(nu[j], z, C_AUTO, &err, &used)
                jm[i, q0 + j] = pow(radius, -nu[j]) * c_jnorm(-nu[j], z, C_AUTO, &err, &used)
    return jp_arr, jm_arr


def imag_entries(nus, int q0, double radius, xs):
    """exp(-x R) times the entries of the blocks at mu = i x."""
    cdef double[::1] nu = np.ascontiguousarray(nus, dtype=float)
    cdef double[::1] xv = np.ascontiguousarray(np.ravel(xs), dtype=float)
    cdef Py_ssize_t n = xv.shape[0], q1 = nu.shape[0], i, j
    cdef int q = q0 + <int>q1, used
    ip_arr = np.empty((n, q))
    im_arr = np.empty((n, q))
    cdef double[:, ::1] ip = ip_arr
    cdef double[:, ::1] im = im_arr
    cdef double log_r = log(radius), z, i0, jt, err
    with nogil:
        for i in range(n):
            z = fabs(xv[i]) * radius
            if q0 > 0:
                i0 = c_inorm_scaled(0.0, z, C_AUTO, &err, &used)
                jt = c_wi_scaled(z, C_AUTO, &err, &used) + log_r * i0
                for j in range(q0):
                    ip[i, j] = i0
                    im[i, j] = jt
            for j in range(q1):
                ip[i, q0 + j] = pow(radius, nu[j]) * c_inorm_scaled(nu[j], z, C_AUTO, &err, &used)
                im[i, q0 + j] = pow(radius, -nu[j]) * c_inorm_scaled(-nu[j], z, C_AUTO, &err, &used)
    return ip_arr, im_arr
