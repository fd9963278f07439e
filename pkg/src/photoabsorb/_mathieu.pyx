# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Mathieu propagator; same algorithm as ``_mathieu_py``."""

from libc.math cimport sin, fabs, pow, fmax, fmin


cdef inline void _deriv(double tau, double delta, double nu, double* y, double* dy) noexcept nogil:
    cdef double w = 1.0 + delta * sin(nu * tau)
    dy[0] = y[1]
    dy[1] = -w * y[0]
    dy[2] = y[3]
    dy[3] = -w * y[2]


cdef inline void _rk4(double tau, double h, double delta, double nu,
                      double* y, double* k1, double* out) noexcept nogil:
    # k1 = f(tau, y) is supplied by the caller
    cdef double k2[4]
    cdef double k3[4]
    cdef double k4[4]
    cdef double tmp[4]
    cdef int i
    for i in range(4):
        tmp[i] = y[i] + 0.5 * h * k1[i]
    _deriv(tau + 0.5 * h, delta, nu, tmp, k2)
    for i in range(4):
        tmp[i] = y[i] + 0.5 * h * k2[i]
    _deriv(tau + 0.5 * h, delta, nu, tmp, k3)
    for i in range(4):
        tmp[i] = y[i] + h * k3[i]
    _deriv(tau + h, delta, nu, tmp, k4)
    for i in range(4):
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


def propagate(double delta, double nu, double tau_start, double tau_end,
              double tol, double h_min=1e-13, long max_steps=100000000):
    """Integrate ``q'' = -(1 + delta sin(nu tau)) q`` for both unit initial conditions.

    Returns ``(m11, m12, m21, m22, steps, status)``; status 0 is success,
    1 step-size underflow, 2 step budget exhausted.
    """
    cdef double y[4]
    cdef double k1[4]
    cdef double big[4]
    cdef double mid[4]
    cdef double small[4]
    cdef double span = tau_end - tau_start
    cdef double tau = tau_start
    cdef double h, err, scale, d, limit, factor
    cdef long steps = 0
    cdef int i, status = 0

    y[0] = 1.0; y[1] = 0.0; y[2] = 0.0; y[3] = 1.0
    if span <= 0.0:
        return 1.0, 0.0, 0.0, 1.0, 0, 0
    h = fmin(span, 0.1)
    with nogil:
        while tau < tau_end:
            if tau + h > tau_end:
                h = tau_end - tau
            _deriv(tau, delta, nu, y, k1)
            _rk4(tau, h, delta, nu, y, k1, big)
            _rk4(tau, 0.5 * h, delta, nu, y, k1, mid)
            _deriv(tau + 0.5 * h, delta, nu, mid, k1)
            _rk4(tau + 0.5 * h, 0.5 * h, delta, nu, mid, k1, small)
            err = 0.0
            scale = 1.0
            for i in range(4):
                d = fabs(small[i] - big[i]) / 15.0
                err = fmax(err, d)
                scale = fmax(scale, fabs(small[i]))
            err = err / scale
            limit = tol * h / span
            if err <= limit:
                for i in range(4):
                    y[i] = small[i] + (small[i] - big[i]) / 15.0
                tau = tau + h
                steps += 1
                if steps >= max_steps:
                    status = 2
                    break
            if err == 0.0:
                factor = 4.0
            else:
                factor = fmin(4.0, fmax(0.2, 0.9 * pow(limit / err, 0.25)))
            h = h * factor
            if h < h_min and tau < tau_end and tau_end - tau > h_min:
                status = 1
                break
    # column k of the transfer matrix is the solution started from unit vector k
    return y[0], y[2], y[1], y[3], steps, status
