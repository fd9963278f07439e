"""Excitation probabilities of a trapped atom hit by the optimal photon.

The regimes are selected explicitly by the caller:

* ``strong_*`` functions expand the photon amplitude to second order around
  the trap centre (small Lamb-Dicke parameters) and keep the full dependence
  on ``gamma / omega_j``;
* ``weak_ratio_gaussian`` and ``p_trace`` treat arbitrary position spreads
  but assume absorption is instantaneous on the trap time scale;
* ``p_squeezed_*`` combine a squeezed thermal state with the
  ``omega / gamma`` corrections of the strong-confinement result.

Ratios that a formula pushes outside ``[0, 1]`` are clamped and flagged.
"""

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .constants import C, HBAR
from .errors import DomainError, RegimeError
from .physcore import DOPPLER_VALID, doppler_ratio, ground_extent

#: largest per-axis Lamb-Dicke parameter accepted by the strong-confinement path
STRONG_ETA_LIMIT = 0.3
#: below this eta0^2 the weak-confinement ratio is summed as a power series
_SERIES_X = 0.1
# Taylor coefficients of the weak-confinement ratio in x = eta0^2
_WEAK_SERIES = (
    1.0,
    -1.0,
    17 / 25,
    -26 / 75,
    74 / 525,
    -1 / 21,
    13 / 945,
    -82 / 23625,
    202 / 259875,
    -122 / 779625,
)
_AXIS_WEIGHTS = (2.0, 2.0, 1.0)  # x, y, z with the dipole along z


@dataclass(frozen=True)
class ExcitationResult:
    p_e: float
    p_id: float
    ratio: float
    regime_tag: str
    clamped: bool = False
    notes: Tuple[str, ...] = ()
    #: formula value before clamping to [0, 1]
    raw: Optional[float] = None


class PhaseSpaceMoments(NamedTuple):
    """Per-axis ``<x_j^2>`` (m^2) and ``<p_j^2>`` ((kg m/s)^2) at ``t_out``."""

    position: Tuple[float, float, float]
    momentum: Tuple[float, float, float]


class SqueezeBound(NamedTuple):
    r: float
    beneficial: bool


def _clamp(value):
    if value < 0.0:
        return 0.0, True
    if value > 1.0:
        return 1.0, True
    return value, False


def _require_z_dipole(atom):
    if atom.dipole_axis != (0.0, 0.0, 1.0):
        raise DomainError("the trap-axis formulas assume a dipole along the trap z axis")


def p_ideal(t, gamma, pulse):
    """Excitation probability of an atom at rest at the origin."""
    if t < pulse.t0:
        raise DomainError("t must not precede the preparation time t0")
    tau = min(t, pulse.t_out)
    rise = -math.expm1(-gamma * (tau - pulse.t0))
    return math.exp(-gamma * abs(pulse.t_out - t)) * rise * rise


def a_coeff(axis_state, omega_j, gamma, dt):
    """Motional factor of one axis in the strong-confinement ratio.

    ``dt = tau - t0``; at ``dt = 0`` the expression is replaced by its limit.
    """
    if dt < 0:
        raise DomainError("dt must be non-negative")
    z = gamma + 2j * omega_j
    if dt == 0:
        growth = z / gamma
    else:
        growth = complex(np.expm1(-z * dt)) / math.expm1(-gamma * dt)
    pair = axis_state.pair_moment.conjugate()
    term = pair * gamma * cmath.exp(2j * omega_j * dt) / z * growth
    return 2 * term.real + 2 * axis_state.occupancy + 1


def a_instantaneous(axis_state, omega_j, dt):
    """``<(b^dag e^{i w dt} + b e^{-i w dt})^2>``, the fast-decay limit of the factor."""
    if dt < 0:
        raise DomainError("dt must be non-negative")
    pair = axis_state.pair_moment.conjugate() * cmath.exp(2j * omega_j * dt)
    return 2 * axis_state.occupancy + 1 + 2 * pair.real


def _strong_deficit(extents_sq, factors, atom):
    total = sum(w * d * f for w, d, f in zip(_AXIS_WEIGHTS, extents_sq, factors))
    return atom.omega_eg**2 / (5 * C**2) * total


def strong_ratio(state, trap, atom, t, pulse, gamma=None):
    """Strong-confinement excitation probability relative to the ideal case.

    Raises
    ------
    RegimeError
        If the largest position spread on some axis exceeds the
        strong-confinement bound; use the weak-confinement functions instead.
    """
    _require_z_dipole(atom)
    gamma = atom.gamma if gamma is None else gamma
    if t < pulse.t0:
        raise DomainError("t must not precede the preparation time t0")
    dt = pulse.tau(t) - pulse.t0
    extents_sq = [ground_extent(atom.mass, w) ** 2 for w in trap.frequencies]
    for name, a, d2 in zip("xyz", state.axes, extents_sq):
        peak = d2 * (2 * a.occupancy + 1 + 2 * abs(a.pair_moment))
        eta = atom.omega_eg * math.sqrt(peak) / C
        if eta >= STRONG_ETA_LIMIT:
            raise RegimeError(
                f"eta_{name} = {eta:.3g} >= {STRONG_ETA_LIMIT}; "
                "use the weak-confinement path"
            )
    factors = [a_coeff(a, w, gamma, dt) for a, w in zip(state.axes, trap.frequencies)]
    raw = 1 - _strong_deficit(extents_sq, factors, atom)
    ratio, clamped = _clamp(raw)
    pid = p_ideal(t, gamma, pulse)
    fast = gamma > max(trap.frequencies)
    tag = "strong-fast" if fast else "strong-slow"
    return ExcitationResult(ratio * pid, pid, ratio, tag, clamped, raw=raw)


def strong_ratio_energy_limit(mean_energies_per_axis, trap, atom):
    """Slow-decay limit: the deficit is set by the per-axis mean energies."""
    _require_z_dipole(atom)
    terms = []
    for e, w in zip(mean_energies_per_axis, trap.frequencies):
        if e < 0.5 * HBAR * w * (1 - 1e-12):
            raise DomainError("mean energy below the zero-point energy")
        terms.append(e / (atom.mass * w**2))
    return 1 - _strong_deficit(terms, (1.0, 1.0, 1.0), atom)


def squeezed_ratio_strong(r_x, r_y, r_z, trap, atom):
    """Fast-decay ratio for squeezed vacuum, evaluated at phase-matched times."""
    _require_z_dipole(atom)
    rs = (r_x, r_y, r_z)
    if min(rs) < 0:
        raise DomainError("squeezing parameters must be non-negative")
    extents_sq = [ground_extent(atom.mass, w) ** 2 for w in trap.frequencies]
    return 1 - _strong_deficit(extents_sq, [math.exp(-2 * r) for r in rs], atom)


def weak_ratio_gaussian(eta0):
    """Weak-confinement ratio ``P_e / P_id`` for an isotropic Gaussian state."""
    if eta0 < 0:
        raise DomainError("eta0 must be non-negative")
    x = eta0 * eta0
    if x < _SERIES_X:
        acc = 0.0
        for c in reversed(_WEAK_SERIES):
            acc = acc * x + c
        return acc
    decay = math.exp(-2 * x)
    return 3 / (10 * x**3) * ((2 * x * x - x + 1) - decay * (2 * x * x + x + 1))


def p_trace(time_grid, eta0, gamma, pulse):
    """Time trace ``P_e(t)`` for a static effective Lamb-Dicke parameter."""
    ratio = weak_ratio_gaussian(eta0)
    return [(t, ratio * p_ideal(t, gamma, pulse)) for t in time_grid]


def x_parameter(mean_energy, atom, omega_T):
    """Dimensionless spread ``w_eg^2 <H0> / (3 m c^2 w_T^2)`` of an isotropic state."""
    return atom.omega_eg**2 * mean_energy / (3 * atom.mass * C**2 * omega_T**2)


def squeezed_thermal_moments(mean_energies_per_axis, r, trap, mass, matched=True):
    """Position and momentum variances of a squeezed thermal state at ``t_out``.

    ``matched`` selects the squeezed position quadrature
    (``sin^2 phi = 0``); otherwise position is anti-squeezed.
    """
    sign = -1.0 if matched else 1.0
    pos, mom = [], []
    for e, w, rj in zip(mean_energies_per_axis, trap.frequencies, np.broadcast_to(r, 3)):
        pos.append(e / (mass * w**2) * math.exp(2 * sign * rj))
        mom.append(mass * e * math.exp(-2 * sign * rj))
    return PhaseSpaceMoments(tuple(pos), tuple(mom))


def p_squeezed_aniso(moments, trap, atom, gamma=None):
    """Excitation probability at ``t_out`` to second order in ``w_j / gamma``.

    All printed terms are kept, including the negative
    ``(2/gamma^2) w_j^2 <x_j^2>`` correction.
    """
    _require_z_dipole(atom)
    gamma = atom.gamma if gamma is None else gamma
    m = atom.mass
    bracket = 0.0
    for w_axis, x2, p2, w in zip(_AXIS_WEIGHTS, moments.position, moments.momentum, trap.frequencies):
        bracket += w_axis * (
            2 * p2 / (gamma**2 * m**2) - 2 * w**2 * x2 / gamma**2 + x2
        )
    raw = 1 - atom.omega_eg**2 / (5 * C**2) * bracket
    p, clamped = _clamp(raw)
    return ExcitationResult(
        p, 1.0, p, "combined", clamped, ("O(omega^3/gamma^3) terms discarded",), raw
    )


def p_squeezed_iso(x_param, r, omega_over_gamma, matched=True):
    """Isotropic squeezed thermal state, ``P_e(t_out)`` to second order in ``w_T/gamma``.

    ``matched=False`` evaluates the anti-squeezed phase ``sin^2 phi = 1``.
    """
    if x_param < 0 or r < 0:
        raise DomainError("x_param and r must be non-negative")
    eps = omega_over_gamma**2
    s = -2 * r if matched else 2 * r
    bracket = (1 - 2 * eps) * math.exp(s) + 2 * eps * math.exp(-s)
    raw = 1 - x_param * bracket
    p, clamped = _clamp(raw)
    return ExcitationResult(
        p, 1.0, p, "combined", clamped, ("O(omega^3/gamma^3) terms discarded",), raw
    )


def optimal_squeeze(gamma, omega_T):
    """Largest squeezing that still raises the isotropic excitation probability."""
    limit = math.sqrt(2) * omega_T
    if gamma <= limit:
        return SqueezeBound(0.0, False)
    return SqueezeBound(0.5 * math.log(gamma / limit), True)


def regime_diagnostics(state, trap, atom, dt=0.0):
    """Dimensionless groups that decide which absorption formula applies."""
    variances = state.position_variances(trap, atom.mass, dt)
    eta = tuple(atom.omega_eg * math.sqrt(v) / C for v in variances)
    doppler = doppler_ratio(state, atom, trap)
    return {
        "eta_per_axis": eta,
        "gamma_over_omega": tuple(atom.gamma / w for w in trap.frequencies),
        "doppler_ratio": doppler.ratio,
        "strong_confinement": max(eta) < STRONG_ETA_LIMIT,
        "instantaneous": doppler.ratio < DOPPLER_VALID,
    }
