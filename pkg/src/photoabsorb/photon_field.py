"""Optimal single-photon amplitude and the electric-dipole pattern functions.

The amplitude is returned dimensionless: it is scaled so that, for an atom
at rest at the origin, it reduces to ``d * exp((i w_eg - G/2)(t_out - t))``
for ``t <= t_out`` (``d`` the dipole unit vector). With this calibration the
ideal excitation probability tends to one.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np

from .constants import C
from .errors import DomainError, RangeError, SingularityError

#: below this |u| the standing-wave combination uses its Taylor series
SERIES_RADIUS = 1e-2
#: validity bound on gamma * r / c for the analytic amplitude
RETARDATION_LIMIT = 1e-3
#: validity bound on eta for the near-origin expansion
NEAR_ORIGIN_LIMIT = 0.3


@dataclass(frozen=True)
class PatternVector:
    """Spherical components of a dipole pattern function at ``(u, theta)``."""

    component_r: Any
    component_theta: Any
    u: Any
    theta: Any

    def along_dipole(self):
        """Projection on the dipole axis, ``cos(theta) e_r - sin(theta) e_theta``."""
        return self.component_r * np.cos(self.theta) - self.component_theta * np.sin(
            self.theta
        )


@dataclass(frozen=True)
class PhotonAmplitude:
    """Dimensionless one-photon amplitude at a space-time point.

    ``vector`` holds Cartesian components; ``t_plus`` and ``t_minus`` are the
    retarded times ``t - t_out -/+ r/c``.
    """

    vector: np.ndarray
    t_plus: float
    t_minus: float
    axis: tuple

    def along(self, direction=None):
        d = np.asarray(self.axis if direction is None else direction, dtype=float)
        return complex(np.dot(self.vector, d))

    @property
    def magnitude(self):
        return float(np.linalg.norm(self.vector))


def dipole_pattern(u, theta, branch="+"):
    """Outgoing (``+``) or incoming (``-``) dipole pattern function.

    ``u = omega r / c`` may be complex or an array. The ``-`` branch is the
    ``+`` expression with ``i -> -i``, which equals its complex conjugate for
    real ``u``.
    """
    if branch not in ("+", "-"):
        raise ValueError("branch must be '+' or '-'")
    u = np.asarray(u) if np.ndim(u) else u
    if np.any(u == 0):
        raise SingularityError(
            "dipole pattern is singular at u = 0; use the near-origin series"
        )
    s = 1j if branch == "+" else -1j
    inv = 1 / u
    inv2 = inv * inv
    inv3 = inv2 * inv
    radial = -np.cos(theta) * (inv2 + s * inv3)
    polar = -0.5 * np.sin(theta) * (inv2 - s * (inv - inv3))
    return PatternVector(radial, polar, u, theta)


def standing_pattern(u, theta):
    """Regular combination ``g+ e^{iu} + g- e^{-iu}`` of the two branches.

    For ``|u| < SERIES_RADIUS`` the closed forms cancel catastrophically and
    the Taylor series through ``u**4`` is used instead.
    """
    u_arr = np.asarray(u)
    scalar = u_arr.ndim == 0
    u_arr = np.atleast_1d(u_arr)
    th = np.broadcast_to(np.asarray(theta, dtype=float), u_arr.shape)
    dtype = np.result_type(u_arr.dtype, np.complex128)
    radial = np.empty(u_arr.shape, dtype=dtype)
    polar = np.empty(u_arr.shape, dtype=dtype)

    small = np.abs(u_arr) < SERIES_RADIUS
    if np.any(small):
        us = u_arr[small] ** 2
        ct, st = np.cos(th[small]), np.sin(th[small])
        radial[small] = ct * (2 / 3 - us / 15 + us * us / 420)
        polar[small] = -st * (2 / 3 - 2 * us / 15 + us * us / 140)
    big = ~small
    if np.any(big):
        ub, tb = u_arr[big], th[big]
        plus = dipole_pattern(ub, tb, "+")
        minus = dipole_pattern(ub, tb, "-")
        ep, em = np.exp(1j * ub), np.exp(-1j * ub)
        radial[big] = plus.component_r * ep + minus.component_r * em
        polar[big] = plus.component_theta * ep + minus.component_theta * em

    if scalar:
        return PatternVector(radial[0], polar[0], u, float(th[0]))
    return PatternVector(radial, polar, u, th)


def _geometry(x, axis):
    """Radius, polar angle and the unit vectors e_r, e_theta about ``axis``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise DomainError("position must be a 3-vector")
    d = np.asarray(axis, dtype=float)
    r = float(np.linalg.norm(x))
    if r == 0:
        return 0.0, 0.0, d, np.zeros(3)
    e_r = x / r
    cos_t = float(np.clip(np.dot(e_r, d), -1.0, 1.0))
    theta = float(np.arccos(cos_t))
    sin_t = np.sin(theta)
    if sin_t > 1e-300:
        e_theta = (cos_t * e_r - d) / sin_t
    else:
        # polar components carry a sin(theta) factor, any transverse unit vector works
        trial = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e_theta = trial - np.dot(trial, d) * d
        e_theta /= np.linalg.norm(e_theta)
    return r, theta, e_r, e_theta


def _to_cartesian(pattern, e_r, e_theta):
    return pattern.component_r * e_r + pattern.component_theta * e_theta


def _check_retardation(r, atom):
    if atom.gamma * r / C > RETARDATION_LIMIT:
        raise RangeError(
            f"gamma*r/c = {atom.gamma * r / C:.3g} exceeds {RETARDATION_LIMIT:g}; "
            "the analytic amplitude does not apply"
        )


def photon_amplitude(x, t, atom, pulse):
    """Full two-branch amplitude at complex frequency ``w_eg + i G/2``.

    Within the light-cone window ``|t - t_out| < r/c`` only the outgoing
    branch contributes.
    """
    r, theta, e_r, e_theta = _geometry(x, atom.dipole_axis)
    _check_retardation(r, atom)
    omega = atom.omega_eg + 0.5j * atom.gamma
    t_plus = t - pulse.t_out - r / C
    t_minus = t - pulse.t_out + r / C
    axis = atom.dipole_axis
    if t_plus > 0:
        return PhotonAmplitude(np.zeros(3, dtype=complex), t_plus, t_minus, axis)
    if r == 0:
        vec = np.exp(-1j * omega * (t - pulse.t_out)) * np.asarray(axis, dtype=complex)
        return PhotonAmplitude(vec, t_plus, t_minus, axis)
    u = omega * r / C
    if t_minus <= 0:
        pattern = standing_pattern(u, theta)
        vec = 1.5 * np.exp(-1j * omega * (t - pulse.t_out)) * _to_cartesian(
            pattern, e_r, e_theta
        )
    else:
        pattern = dipole_pattern(u, theta, "+")
        vec = 1.5 * np.exp(-1j * omega * t_plus) * _to_cartesian(pattern, e_r, e_theta)
    return PhotonAmplitude(vec, t_plus, t_minus, axis)


def photon_amplitude_near_origin(x, t, atom, pulse):
    """Second-order expansion of the amplitude in ``eta = w_eg r / c``."""
    r, theta, e_r, e_theta = _geometry(x, atom.dipole_axis)
    eta = atom.omega_eg * r / C
    if eta >= NEAR_ORIGIN_LIMIT:
        raise RangeError(f"eta = {eta:.3g} >= {NEAR_ORIGIN_LIMIT}; expansion invalid")
    t_plus = t - pulse.t_out - r / C
    t_minus = t - pulse.t_out + r / C
    axis = atom.dipole_axis
    if t > pulse.t_out:
        return PhotonAmplitude(np.zeros(3, dtype=complex), t_plus, t_minus, axis)
    phase = np.exp((1j * atom.omega_eg - 0.5 * atom.gamma) * (pulse.t_out - t))
    d = np.asarray(axis, dtype=float)
    vec = phase * (d * (1 - eta**2 / 10) + e_theta * np.sin(theta) * eta**2 / 10)
    return PhotonAmplitude(vec.astype(complex), t_plus, t_minus, axis)


def photon_amplitude_instantaneous(x, t, atom, pulse):
    """Amplitude with retardation dropped, patterns at the real ``w_eg``.

    The spatial profile is time independent; the time dependence is the
    rising exponential envelope cut off at ``t_out``.
    """
    r, theta, e_r, e_theta = _geometry(x, atom.dipole_axis)
    _check_retardation(r, atom)
    t_plus = t - pulse.t_out - r / C
    t_minus = t - pulse.t_out + r / C
    axis = atom.dipole_axis
    if t > pulse.t_out:
        return PhotonAmplitude(np.zeros(3, dtype=complex), t_plus, t_minus, axis)
    envelope = np.exp(-1j * (atom.omega_eg + 0.5j * atom.gamma) * (t - pulse.t_out))
    if r == 0:
        return PhotonAmplitude(envelope * np.asarray(axis, dtype=complex), t_plus, t_minus, axis)
    pattern = standing_pattern(atom.omega_eg * r / C, theta)
    vec = 1.5 * envelope * _to_cartesian(pattern, e_r, e_theta)
    return PhotonAmplitude(vec, t_plus, t_minus, axis)


def weak_integrand(u, cos_theta):
    """``(3/2 * e_d . standing_pattern)^2`` for real ``u``; vectorised.

    This is the single-position value whose Gaussian average gives the
    weak-confinement absorption ratio.
    """
    theta = np.arccos(np.clip(cos_theta, -1.0, 1.0))
    longitudinal = standing_pattern(u, theta).along_dipole().real
    return (1.5 * longitudinal) ** 2
