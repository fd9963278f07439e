"""Centre-of-mass states and their evolution in static and modulated traps.

A state is stored per Cartesian axis through the normally ordered second
moments ``<b^dag b>`` and ``<b^2>`` of the trap oscillator. Phase-space
transfer matrices act on the oscillator quadratures
``q = x sqrt(m w_T / hbar)`` and ``p = p_x / sqrt(m hbar w_T)``, in which the
ground state has covariance ``diag(1/2, 1/2)`` and free motion is a rotation.
"""

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _backend
from .constants import HBAR, KB
from .errors import DomainError, IntegrationError
from .physcore import ground_extent

AXES = ("x", "y", "z")


def wrap_angle(phi):
    """Map an angle into ``(-pi, pi]``."""
    return math.pi - (math.pi - phi) % (2 * math.pi)


@dataclass(frozen=True)
class AxisState:
    """Second moments of one trap axis: ``<b^dag b>`` and ``<b b>``."""

    occupancy: float
    pair_moment: complex = 0j

    def __post_init__(self):
        n = self.occupancy
        if n < 0:
            raise DomainError("occupancy must be non-negative")
        # compare squares so both sides underflow together at tiny squeezing
        if abs(self.pair_moment) ** 2 > n * (n + 1) * (1 + 2e-12) + 1e-300:
            raise DomainError(
                f"|<b^2>| = {abs(self.pair_moment):.6g} exceeds "
                f"sqrt(n(n+1)) = {math.sqrt(n * (n + 1)):.6g}"
            )
        object.__setattr__(self, "pair_moment", complex(self.pair_moment))


def _per_axis(value):
    if np.ndim(value) == 0:
        return (value, value, value)
    if len(value) != 3:
        raise DomainError("expected a scalar or one value per axis")
    return tuple(value)


@dataclass(frozen=True)
class CoMState:
    """Centre-of-mass state given by per-axis oscillator moments.

    ``is_gaussian`` is False for number states; ``displaced`` marks coherent
    states whose moments are raw rather than central.
    """

    x: AxisState
    y: AxisState
    z: AxisState
    is_gaussian: bool = True
    displaced: bool = False
    label: str = "custom"

    @property
    def axes(self):
        return (self.x, self.y, self.z)

    @classmethod
    def ground(cls):
        g = AxisState(0.0, 0j)
        return cls(g, g, g, label="ground")

    @classmethod
    def thermal(cls, nbar):
        ax = [AxisState(float(n), 0j) for n in _per_axis(nbar)]
        return cls(*ax, label="thermal")

    @classmethod
    def thermal_temperature(cls, temperature, trap):
        """Thermal state of ``trap`` at ``temperature`` (Bose-Einstein occupation)."""
        if temperature < 0:
            raise DomainError("temperature must be non-negative")
        if temperature == 0:
            return cls.ground()
        nbar = [1.0 / math.expm1(HBAR * w / (KB * temperature)) for w in trap.frequencies]
        return cls.thermal(nbar)

    @classmethod
    def doppler_limit(cls, gamma, trap):
        """Thermal state at the Doppler temperature ``kB T_D = hbar gamma / 2``.

        Each axis carries the classical mean energy ``kB T_D``.
        """
        e = HBAR * gamma / 2
        nbar = [max(e / (HBAR * w) - 0.5, 0.0) for w in trap.frequencies]
        state = cls.thermal(nbar)
        return cls(*state.axes, label="doppler")

    @classmethod
    def squeezed(cls, r, phi=0.0):
        """Squeezed vacuum ``S(xi)|0>`` with ``xi = r exp(2 i phi)`` per axis."""
        return cls.squeezed_thermal(0.0, r, phi)

    @classmethod
    def squeezed_thermal(cls, nbar, r, phi=0.0):
        axes = []
        for n, rj, pj in zip(_per_axis(nbar), _per_axis(r), _per_axis(phi)):
            if rj < 0:
                raise DomainError("squeezing parameter must be non-negative")
            w = 2 * n + 1
            # w cosh(2r)/2 - 1/2 written without cancellation at small r
            occ = w * math.sinh(rj) ** 2 + n
            pair = -w * cmath.exp(2j * pj) * math.sinh(rj) * math.cosh(rj)
            axes.append(AxisState(occ, pair))
        label = "squeezed" if np.all(np.asarray(_per_axis(nbar)) == 0) else "squeezed-thermal"
        return cls(*axes, label=label)

    @classmethod
    def coherent(cls, alpha):
        """Coherent state; moments are raw, so the state is flagged as displaced."""
        axes = [AxisState(abs(a) ** 2, complex(a) ** 2) for a in _per_axis(alpha)]
        return cls(*axes, displaced=True, label="coherent")

    @classmethod
    def fock(cls, n):
        axes = [AxisState(float(k), 0j) for k in _per_axis(n)]
        return cls(*axes, is_gaussian=False, label="fock")

    def mean_energies(self, trap):
        """Per-axis mean oscillator energy ``hbar w_j (<b^dag b> + 1/2)``."""
        return tuple(HBAR * w * (a.occupancy + 0.5) for a, w in zip(self.axes, trap.frequencies))

    def position_variances(self, trap, mass, dt=0.0):
        return tuple(
            free_moment(a, w, mass, dt) for a, w in zip(self.axes, trap.frequencies)
        )


def free_moment(axis_state, omega, mass, dt):
    """Interaction-picture ``<x^2>`` of one axis, ``dt`` after preparation."""
    if dt < 0:
        raise DomainError("dt must be non-negative")
    pair = axis_state.pair_moment.conjugate() * cmath.exp(2j * omega * dt)
    return ground_extent(mass, omega) ** 2 * (
        2 * axis_state.occupancy + 1 + 2 * pair.real
    )


@dataclass(frozen=True)
class ModulationSpec:
    """Trap modulation ``w^2(t) = w_T^2 (1 + delta sin(omega_M (t - t0)))``."""

    delta: float
    omega_M: float
    t0: float = 0.0

    def __post_init__(self):
        if not abs(self.delta) < 1:
            raise DomainError("|delta| must be below 1")
        if self.omega_M <= 0:
            raise DomainError("omega_M must be positive")


@dataclass(frozen=True)
class TransferMatrix:
    """Real 2x2 phase-space map in oscillator quadratures from ``t_start`` to ``t_end``."""

    m11: float
    m12: float
    m21: float
    m22: float
    t_start: float
    t_end: float

    @property
    def matrix(self):
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    @property
    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def trace(self):
        return self.m11 + self.m22

    def __matmul__(self, earlier):
        """``later @ earlier`` composes two consecutive maps."""
        m = self.matrix @ earlier.matrix
        return TransferMatrix(m[0, 0], m[0, 1], m[1, 0], m[1, 1], earlier.t_start, self.t_end)

    @classmethod
    def rotation(cls, angle, t_start=0.0, t_end=0.0):
        c, s = math.cos(angle), math.sin(angle)
        return cls(c, s, -s, c, t_start, t_end)


class SqueezeParams(NamedTuple):
    r: float
    phi: float


class FloquetResult(NamedTuple):
    stable: bool
    trace_magnitude: float


def mathieu_transfer(mod, omega_T, t, tol=1e-9, t_start=None):
    """Transfer matrix of the modulated oscillator from ``t_start`` to ``t``.

    ``t_start`` defaults to the preparation time ``mod.t0``; the modulation
    phase is always referenced to ``mod.t0``.
    """
    if t_start is None:
        t_start = mod.t0
    if t_start < mod.t0 or t < t_start:
        raise DomainError("require mod.t0 <= t_start <= t")
    if not 1e-12 <= tol <= 1e-4:
        raise DomainError("tol must lie in [1e-12, 1e-4]")
    m11, m12, m21, m22, steps, status = _backend.propagate(
        mod.delta,
        mod.omega_M / omega_T,
        omega_T * (t_start - mod.t0),
        omega_T * (t - mod.t0),
        tol,
    )
    if status == 1:
        raise IntegrationError("step size underflow in Mathieu integration")
    if status == 2:
        raise IntegrationError("step budget exhausted in Mathieu integration")
    return TransferMatrix(m11, m12, m21, m22, t_start, t)


def floquet_classify(mod, omega_T, tol=1e-9):
    """Stability of the modulated trap from the one-period monodromy trace."""
    period = 2 * math.pi / mod.omega_M
    m = mathieu_transfer(mod, omega_T, mod.t0 + period, tol)
    tr = abs(m.trace)
    return FloquetResult(tr <= 2.0, tr)


def squeeze_from_transfer(m):
    """Squeezing of the ground state after the phase-space map ``m``.

    The phase is chosen so that :func:`modulated_variance` reproduces the
    propagated position variance; it is reported in ``(-pi/2, pi/2]``.
    """
    if abs(m.det - 1) > 1e-6:
        raise DomainError(f"transfer matrix is not symplectic (det = {m.det:.12g})")
    mat = m.matrix
    cov = 0.5 * mat @ mat.T
    vals, vecs = np.linalg.eigh(cov)
    lam = vals[-1]
    r = 0.5 * math.log(2 * lam) if lam > 0.5 else 0.0
    alpha = math.atan2(vecs[1, -1], vecs[0, -1])
    phi = -alpha - math.pi / 2
    # variance depends on phi modulo pi only
    phi = math.pi / 2 - (math.pi / 2 - phi) % math.pi
    return SqueezeParams(max(r, 0.0), phi)


def squeeze_approx(delta, omega_T, dt):
    """Resonant-modulation estimate ``r = w_T delta dt / 4``, ``phi = w_T dt - pi/2``."""
    if dt < 0:
        raise DomainError("dt must be non-negative")
    return SqueezeParams(omega_T * delta * dt / 4, wrap_angle(omega_T * dt - math.pi / 2))


def modulated_variance(mean_energy, mass, omega_T, sq):
    """Position variance ``<H0>/(m w_T^2) (e^{-2r} cos^2 phi + e^{2r} sin^2 phi)``."""
    if mean_energy < 0:
        raise DomainError("mean energy must be non-negative")
    r, phi = sq
    return mean_energy / (mass * omega_T**2) * (
        math.exp(-2 * r) * math.cos(phi) ** 2 + math.exp(2 * r) * math.sin(phi) ** 2
    )


def thermal_energy(omega_T, temperature):
    """Mean energy of the isotropic 3D oscillator at ``temperature``."""
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    quantum = HBAR * omega_T
    if temperature == 0:
        return 1.5 * quantum
    return 3 * quantum * (0.5 + 1.0 / math.expm1(quantum / (KB * temperature)))
