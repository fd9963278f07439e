"""Parameter containers and derived scalar quantities.

All quantities are SI. The dimensionless groups that control the different
absorption regimes (Lamb-Dicke parameters, ``gamma / omega_T``, the Doppler
ratio) are exposed as plain functions or properties.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .constants import (
    C,
    EPS0,
    HBAR,
    YB174_GAMMA,
    YB174_MASS,
    YB174_OMEGA_EG,
    YB174_OMEGA_T,
)
from .errors import DomainError

#: smallest admissible omega_eg / gamma (rotating-wave approximation)
MIN_QUALITY = 1e3
#: threshold below which the Doppler condition counts as satisfied
DOPPLER_VALID = 1e-2


def spontaneous_rate(dipole_magnitude, omega_eg):
    """Free-space decay rate ``omega^3 d^2 / (3 pi eps0 hbar c^3)``."""
    if dipole_magnitude < 0 or omega_eg < 0:
        raise DomainError("dipole magnitude and frequency must be non-negative")
    return omega_eg**3 * dipole_magnitude**2 / (3 * math.pi * EPS0 * HBAR * C**3)


def ground_extent(mass, omega):
    """Ground-state position spread ``sqrt(hbar / (2 m omega))`` in metres."""
    if mass <= 0 or omega <= 0:
        raise DomainError("mass and trap frequency must be positive")
    return math.sqrt(HBAR / (2 * mass * omega))


def effective_lamb_dicke(variance_3d, omega_eg):
    """Effective Lamb-Dicke parameter of an isotropic Gaussian state.

    Parameters
    ----------
    variance_3d : float
        Total position variance ``<x^2 + y^2 + z^2>`` in m^2.
    omega_eg : float
        Transition frequency in rad/s.
    """
    if variance_3d < 0:
        raise DomainError("variance must be non-negative")
    return omega_eg / C * math.sqrt(variance_3d / 3)


@dataclass(frozen=True)
class AtomSpec:
    """Two-level transition and the mass of the trapped particle.

    ``gamma`` may be given directly, or derived from ``dipole_magnitude``.
    When both are supplied the given ``gamma`` is kept and a mismatch larger
    than 0.1 % is reported through ``warnings`` and ``consistency_warning``.
    """

    omega_eg: float
    gamma: Optional[float]
    mass: float
    dipole_axis: Tuple[float, float, float] = (0.0, 0.0, 1.0)
    dipole_magnitude: Optional[float] = None
    consistency_warning: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.gamma is None:
            if self.dipole_magnitude is None:
                raise DomainError("either gamma or dipole_magnitude is required")
            object.__setattr__(
                self, "gamma", spontaneous_rate(self.dipole_magnitude, self.omega_eg)
            )
        elif self.dipole_magnitude is not None:
            from_dipole = spontaneous_rate(self.dipole_magnitude, self.omega_eg)
            mismatch = abs(from_dipole - self.gamma) / self.gamma
            if mismatch > 1e-3:
                msg = (
                    f"gamma={self.gamma:.6g} 1/s disagrees with the dipole value "
                    f"{from_dipole:.6g} 1/s; keeping the supplied gamma"
                )
                object.__setattr__(self, "consistency_warning", msg)
                warnings.warn(msg, stacklevel=3)
        if not (self.omega_eg > 0 and self.gamma > 0 and self.mass > 0):
            raise DomainError("omega_eg, gamma and mass must be positive")
        if self.omega_eg / self.gamma < MIN_QUALITY:
            raise DomainError(
                f"omega_eg/gamma = {self.omega_eg / self.gamma:.3g} < {MIN_QUALITY:g}; "
                "rotating-wave approximation not applicable"
            )
        axis = np.asarray(self.dipole_axis, dtype=float)
        norm = np.linalg.norm(axis)
        if axis.shape != (3,) or norm == 0:
            raise DomainError("dipole_axis must be a non-zero 3-vector")
        object.__setattr__(self, "dipole_axis", tuple(float(a) for a in axis / norm))

    @property
    def wavelength_eg(self):
        return 2 * math.pi * C / self.omega_eg

    @property
    def wavenumber(self):
        return self.omega_eg / C

    def lamb_dicke(self, omega):
        """Per-axis Lamb-Dicke parameter ``omega_eg * Delta_0 / c``."""
        return self.omega_eg * ground_extent(self.mass, omega) / C


@dataclass(frozen=True)
class TrapSpec:
    """Static anisotropic harmonic trap, angular frequencies in rad/s."""

    omega_x: float
    omega_y: float
    omega_z: float

    def __post_init__(self):
        if min(self.omega_x, self.omega_y, self.omega_z) <= 0:
            raise DomainError("trap frequencies must be positive")

    @classmethod
    def isotropic(cls, omega):
        return cls(omega, omega, omega)

    @property
    def frequencies(self):
        return (self.omega_x, self.omega_y, self.omega_z)

    @property
    def is_isotropic(self):
        w = self.frequencies
        return max(w) - min(w) <= 1e-12 * max(w)

    @property
    def omega_T(self):
        if not self.is_isotropic:
            raise DomainError("omega_T is only defined for an isotropic trap")
        return self.omega_z


@dataclass(frozen=True)
class PulseSpec:
    """Timing of the optimal single-photon wavepacket.

    ``t0`` is the preparation time and ``t_out`` the time at which a
    motionless atom at the origin would be excited.
    """

    t0: float
    t_out: float

    def __post_init__(self):
        if not self.t_out > self.t0:
            raise DomainError("t_out must be later than t0")

    @classmethod
    def for_gamma(cls, gamma, gamma_duration=20.0, t0=0.0):
        """Pulse with ``gamma * (t_out - t0) = gamma_duration``."""
        return cls(t0, t0 + gamma_duration / gamma)

    def tau(self, t):
        return min(t, self.t_out)

    def is_long(self, gamma):
        """True in the large-interaction-time regime ``gamma (t_out - t0) >= 10``."""
        return gamma * (self.t_out - self.t0) >= 10


class DopplerRatio(NamedTuple):
    ratio: float
    per_axis: Tuple[float, float, float]
    instantaneous_valid: bool


def doppler_ratio(state, atom, trap):
    """Velocity spread over ``lambda_eg * gamma``, worst axis.

    Uses ``dv_j = sqrt(<H_j> / m)`` with the per-axis mean energy supplied by
    ``state.mean_energies(trap)``.
    """
    scale = atom.wavelength_eg * atom.gamma
    per_axis = tuple(
        math.sqrt(e / atom.mass) / scale for e in state.mean_energies(trap)
    )
    worst = max(per_axis)
    return DopplerRatio(worst, per_axis, worst < DOPPLER_VALID)


def yb174(gamma=YB174_GAMMA, omega_eg=YB174_OMEGA_EG):
    """Atom preset for the Yb-174 experiment."""
    return AtomSpec(omega_eg=omega_eg, gamma=gamma, mass=YB174_MASS)


def yb174_trap(omega_T=YB174_OMEGA_T):
    return TrapSpec.isotropic(omega_T)
