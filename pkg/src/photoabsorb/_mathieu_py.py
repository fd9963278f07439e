"""Pure-Python Mathieu propagator, used when the compiled kernel is absent."""

import math


def _deriv(tau, delta, nu, y):
    w = 1.0 + delta * math.sin(nu * tau)
    return (y[1], -w * y[0], y[3], -w * y[2])


def _rk4(tau, h, delta, nu, y, k1):
    half = 0.5 * h
    k2 = _deriv(tau + half, delta, nu, [y[i] + half * k1[i] for i in range(4)])
    k3 = _deriv(tau + half, delta, nu, [y[i] + half * k2[i] for i in range(4)])
    k4 = _deriv(tau + h, delta, nu, [y[i] + h * k3[i] for i in range(4)])
    return [
        y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(4)
    ]


def propagate(delta, nu, tau_start, tau_end, tol, h_min=1e-13, max_steps=100_000_000):
    """Integrate ``q'' = -(1 + delta sin(nu tau)) q`` for both unit initial conditions.

    Returns ``(m11, m12, m21, m22, steps, status)``; status 0 is success,
    1 step-size underflow, 2 step budget exhausted.
    """
    y = [1.0, 0.0, 0.0, 1.0]
    span = tau_end - tau_start
    if span <= 0.0:
        return 1.0, 0.0, 0.0, 1.0, 0, 0
    tau = tau_start
    h = min(span, 0.1)
    steps = 0
    status = 0
    while tau < tau_end:
        if tau + h > tau_end:
            h = tau_end - tau
        k1 = _deriv(tau, delta, nu, y)
        big = _rk4(tau, h, delta, nu, y, k1)
        mid = _rk4(tau, 0.5 * h, delta, nu, y, k1)
        small = _rk4(tau + 0.5 * h, 0.5 * h, delta, nu, mid, _deriv(tau + 0.5 * h, delta, nu, mid))
        err = max(abs(s - b) for s, b in zip(small, big)) / 15.0
        err /= max(1.0, max(abs(s) for s in small))
        limit = tol * h / span
        if err <= limit:
            y = [s + (s - b) / 15.0 for s, b in zip(small, big)]
            tau += h
            steps += 1
            if steps >= max_steps:
                status = 2
                break
        factor = 4.0 if err == 0.0 else min(4.0, max(0.2, 0.9 * (limit / err) ** 0.25))
        h *= factor
        if h < h_min and tau < tau_end and tau_end - tau > h_min:
            status = 1
            break
    return y[0], y[2], y[1], y[3], steps, status
