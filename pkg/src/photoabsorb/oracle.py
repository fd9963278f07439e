"""Brute-force reference computations used to validate the closed forms.

* :func:`quad_strong` integrates the strong-confinement double time integral
  on a tensor grid of Gauss-Legendre panels.
* :func:`mc_weak` averages the weak-confinement integrand over Gaussian
  position samples drawn with the Philox4x64-10 counter-based generator.
* :func:`mathieu_reference` integrates the modulated oscillator with a
  Gragg-Bulirsch-Stoer extrapolation scheme, independent of the RK4 kernel.
* :func:`fock_quadrature_moment` evaluates squeezed-vacuum moments in a
  truncated number basis.
* :func:`mp_doppler_ratio` and :func:`mp_headline_numbers` recompute scalar
  results in 40-digit arithmetic.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import mpmath
import numpy as np
from scipy import sparse
from scipy.sparse.linalg import expm_multiply

from .constants import C, HBAR
from .dynamics import TransferMatrix, free_moment
from .errors import AccuracyError, DomainError, IntegrationError, RegimeError, UnsupportedStateError
from .photon_field import weak_integrand


@dataclass(frozen=True)
class QuadratureConfig:
    tol: float = 1e-10
    max_subdivisions: int = 1024
    order: int = 12

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError("quadrature tolerance must be positive")
        if self.max_subdivisions < 8:
            raise DomainError("max_subdivisions must be at least 8")
        if self.order < 2:
            raise DomainError("panel rule order must be at least 2")


@dataclass(frozen=True)
class MonteCarloConfig:
    sample_count: int = 1_000_000
    seed: int = 20150101
    antithetic: bool = False
    workers: int = 1
    chunk_size: int = 65536

    def __post_init__(self):
        if self.sample_count < 1000:
            raise DomainError("sample_count must be at least 1000")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.workers < 1 or self.chunk_size < 2:
            raise DomainError("workers and chunk_size must be positive")


class MonteCarloResult(NamedTuple):
    estimate: float
    standard_error: float
    samples: int
    workers: int


# ---------------------------------------------------------------- quadrature


def _panel_nodes(a, b, panels, order):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _tensor_sum(nodes, weights, gamma, tau, deficit):
    """Sum of ``w1 w2 exp(-G(tau-t1)) exp(-G(tau-t2)) (1 - D(t2))`` over the grid."""
    f1 = weights * np.exp(-gamma * (tau - nodes))
    f2 = f1 * (1.0 - deficit(nodes))
    total = 0.0
    block = 512
    for start in range(0, nodes.size, block):
        rows = f1[start:start + block, None] * f2[None, :]
        total += math.fsum(rows.sum(axis=1))
    return total


def quad_double_integral(deficit, gamma, pulse, t, cfg=QuadratureConfig(), scales=()):
    """``G^2 int int dt1 dt2 e^{-G(t + t_out - t1 - t2)} (1 - D(t2))`` over ``[t0, tau]^2``.

    ``deficit`` maps an array of absolute times ``t2`` to ``D(t2)``. Panels are
    no wider than a unit of ``2/gamma`` or any time scale listed in ``scales``.
    """
    if t < pulse.t0:
        raise DomainError("t must not precede t0")
    tau = min(t, pulse.t_out)
    span = tau - pulse.t0
    if span == 0:
        return 0.0
    width = min([2.0 / gamma, *scales])
    panels = max(4, math.ceil(span / width))
    prefactor = gamma**2 * math.exp(-gamma * abs(t - pulse.t_out))

    def estimate(n):
        nodes, weights = _panel_nodes(pulse.t0, tau, n, cfg.order)
        return prefactor * _tensor_sum(nodes, weights, gamma, tau, deficit)

    previous = estimate(panels)
    while True:
        panels *= 2
        if panels > cfg.max_subdivisions:
            raise AccuracyError(
                "double integral did not converge within the subdivision budget",
                estimate=previous,
            )
        current = estimate(panels)
        err = abs(current - previous)
        if err <= cfg.tol:
            return current
        previous = current


def quad_strong(state, trap, atom, pulse, t, cfg=QuadratureConfig(), gamma=None, check_regime=True):
    """Strong-confinement excitation probability by direct double quadrature.

    The interaction-picture variances enter at the second time argument
    only, as in the expanded double integral.
    """
    gamma = atom.gamma if gamma is None else gamma
    if check_regime:
        for a, w in zip(state.axes, trap.frequencies):
            # <x^2(s)> = mean + amp cos(2 w s + c); recover both from three samples
            f0, f1, f2 = (free_moment(a, w, atom.mass, k * math.pi / (4 * w)) for k in range(3))
            mean = 0.5 * (f0 + f2)
            peak = mean + math.hypot(0.5 * (f0 - f2), mean - f1)
            eta = atom.omega_eg * math.sqrt(peak) / C
            if eta >= 0.3:
                raise RegimeError(f"eta = {eta:.3g} outside strong confinement")
    coeff = atom.omega_eg**2 / (5 * C**2)
    weights = (2.0, 2.0, 1.0)
    axes = list(zip(weights, state.axes, trap.frequencies))

    def deficit(times):
        out = np.zeros_like(times)
        for wt, a, w in axes:
            out += wt * np.array([free_moment(a, w, atom.mass, s - pulse.t0) for s in times])
        return coeff * out

    scales = tuple(math.pi / (2 * w) for w in trap.frequencies)
    return quad_double_integral(deficit, gamma, pulse, t, cfg, scales)


# ---------------------------------------------------------------- Monte Carlo


def _mc_chunk(seed_seq, n, sigma, k, antithetic):
    rng = np.random.Generator(np.random.Philox(seed_seq))
    if antithetic:
        half = (n + 1) // 2
        pos = rng.standard_normal((half, 3)) * sigma
        values = 0.5 * (_integrand(pos, k) + _integrand(-pos, k))
    else:
        values = _integrand(rng.standard_normal((n, 3)) * sigma, k)
    return math.fsum(values), math.fsum(values * values), values.size


def _integrand(pos, k):
    r = np.sqrt(np.einsum("ij,ij->i", pos, pos))
    cos_theta = np.divide(pos[:, 2], r, out=np.ones_like(r), where=r > 0)
    return weak_integrand(k * r, cos_theta)


def mc_weak(state, atom, trap, cfg=MonteCarloConfig(), dt=0.0):
    """Monte-Carlo weak-confinement ratio for an isotropic, centred Gaussian state.

    Samples are split into fixed chunks with seeds spawned from ``cfg.seed``,
    so the estimate does not depend on ``cfg.workers``.
    """
    if not state.is_gaussian or state.displaced:
        raise UnsupportedStateError("mc_weak needs a centred Gaussian state")
    variances = state.position_variances(trap, atom.mass, dt)
    if max(variances) - min(variances) > 1e-9 * max(variances):
        raise UnsupportedStateError("mc_weak needs an isotropic position distribution")
    return mc_weak_sigma(math.sqrt(variances[0]), atom.omega_eg / C, cfg)


def mc_weak_sigma(sigma, k, cfg=MonteCarloConfig()):
    """Average of the weak-confinement integrand over ``N(0, sigma^2)`` per axis.

    ``k`` is the transition wavenumber, so ``k * sigma`` is the effective
    Lamb-Dicke parameter.
    """
    if sigma < 0 or k <= 0:
        raise DomainError("sigma must be non-negative and k positive")
    n_chunks = math.ceil(cfg.sample_count / cfg.chunk_size)
    sizes = [cfg.chunk_size] * (n_chunks - 1) + [cfg.sample_count - cfg.chunk_size * (n_chunks - 1)]
    seeds = np.random.SeedSequence(cfg.seed).spawn(n_chunks)
    jobs = list(zip(seeds, sizes))
    run = lambda job: _mc_chunk(job[0], job[1], sigma, k, cfg.antithetic)
    if cfg.workers == 1:
        parts = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(run, jobs))
    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    count = sum(p[2] for p in parts)
    mean = total / count
    var = max(total_sq / count - mean * mean, 0.0) * count / (count - 1)
    return MonteCarloResult(mean, math.sqrt(var / count), count, cfg.workers)


# ---------------------------------------------------------------- Mathieu reference


_ROUNDOFF_FLOOR = 1e-14


def _mathieu_rhs(tau, y, delta, nu):
    w = 1.0 + delta * math.sin(nu * tau)
    return np.array([y[1], -w * y[0], y[3], -w * y[2]])


def _modified_midpoint(tau, y, big_h, n, delta, nu):
    h = big_h / n
    z_prev = y
    z = y + h * _mathieu_rhs(tau, y, delta, nu)
    for m in range(1, n):
        z_prev, z = z, z_prev + 2 * h * _mathieu_rhs(tau + m * h, z, delta, nu)
    return 0.5 * (z + z_prev + h * _mathieu_rhs(tau + big_h, z, delta, nu))


def mathieu_reference(mod, omega_T, t, tol=1e-11, t_start=None, max_levels=9):
    """Reference transfer matrix by Gragg-Bulirsch-Stoer extrapolation.

    Each macro step runs the modified midpoint rule with 2, 4, 8, ...
    substeps and extrapolates in ``h^2`` until successive tableau diagonals
    agree; otherwise the macro step is halved.
    """
    if tol > 1e-10:
        raise DomainError("reference integration requires tol <= 1e-10")
    if t_start is None:
        t_start = mod.t0
    if t < t_start or t_start < mod.t0:
        raise DomainError("require mod.t0 <= t_start <= t")
    nu = mod.omega_M / omega_T
    tau = omega_T * (t_start - mod.t0)
    tau_end = omega_T * (t - mod.t0)
    span = tau_end - tau
    y = np.array([1.0, 0.0, 0.0, 1.0])
    big_h = min(span, 0.5) if span > 0 else 0.0
    while tau < tau_end:
        remaining = tau_end - tau
        # absorb a leftover sliver into the final step
        last = big_h >= remaining - 1e-10 * max(1.0, abs(tau_end))
        if last:
            big_h = remaining
        if big_h < 1e-12:
            raise IntegrationError("step size underflow in reference integration")
        tableau = []
        accepted = None
        for level in range(max_levels):
            n = 2 ** (level + 1)
            row = [_modified_midpoint(tau, y, big_h, n, delta=mod.delta, nu=nu)]
            for j in range(1, level + 1):
                ratio = (n / 2 ** (level - j + 1)) ** 2
                row.append(row[j - 1] + (row[j - 1] - tableau[-1][j - 1]) / (ratio - 1))
            if level > 0:
                err = np.max(np.abs(row[-1] - tableau[-1][-1])) / max(1.0, np.max(np.abs(row[-1])))
                # per-step share of tol, floored above midpoint roundoff
                if err <= max(tol * big_h / span, _ROUNDOFF_FLOOR):
                    accepted = (row[-1], level)
                    break
            tableau.append(row)
        if accepted is None:
            big_h *= 0.5
            continue
        y, level = accepted
        tau = tau_end if last else tau + big_h
        if level < 4:
            big_h *= 1.5
    return TransferMatrix(y[0], y[2], y[1], y[3], t_start, t)


# ---------------------------------------------------------------- number basis


def _fock_moment(dim, r, phi, angle):
    b = sparse.diags(np.sqrt(np.arange(1, dim)), 1, format="csr", dtype=complex)
    bd = b.conj().T.tocsr()
    xi = r * np.exp(2j * phi)
    gen = 0.5 * (np.conj(xi) * (b @ b) - xi * (bd @ bd))
    vac = np.zeros(dim, dtype=complex)
    vac[0] = 1.0
    psi = expm_multiply(gen, vac)
    quad = bd * np.exp(1j * angle) + b * np.exp(-1j * angle)
    v = quad @ psi
    return float(np.vdot(v, v).real)


def fock_quadrature_moment(r, phi, angle, rel_tol=1e-8, max_dim=4096):
    """``<(b^dag e^{i a} + b e^{-i a})^2>`` of ``S(r e^{2 i phi})|0>`` by truncation.

    The basis starts at ``20 sinh^2 r + 40`` states and is doubled until the
    moment changes by less than ``rel_tol``.
    """
    dim = int(20 * math.sinh(r) ** 2 + 40)
    value = _fock_moment(dim, r, phi, angle)
    while dim < max_dim:
        dim *= 2
        new = _fock_moment(dim, r, phi, angle)
        if abs(new - value) <= rel_tol * abs(new):
            return new
        value = new
    raise AccuracyError("number-basis truncation did not converge", estimate=value)


# ---------------------------------------------------------------- high precision


def _mp(x):
    return mpmath.mpf(repr(float(x)))


def mp_doppler_ratio(mean_energy, mass, omega_eg, gamma):
    """``sqrt(E / m) / (lambda gamma)`` with ``lambda = 2 pi c / omega_eg``."""
    with mpmath.workdps(40):
        lam = 2 * mpmath.pi * _mp(C) / _mp(omega_eg)
        value = mpmath.sqrt(_mp(mean_energy) / _mp(mass)) / (lam * _mp(gamma))
        return float(value)


def mp_headline_numbers(omega_eg, gamma, mass, omega_T):
    """Wavelength, Doppler ratios, spread parameters and squeezing bound."""
    with mpmath.workdps(40):
        w_eg, g, m, w = _mp(omega_eg), _mp(gamma), _mp(mass), _mp(omega_T)
        hbar, c = _mp(HBAR), _mp(C)
        lam = 2 * mpmath.pi * c / w_eg
        e_ground = hbar * w / 2
        e_doppler = hbar * g / 2

        def x_param(energy_3d):
            return w_eg**2 * energy_3d / (3 * m * c**2 * w**2)

        out = {
            "wavelength": lam,
            "doppler_ratio_ground": mpmath.sqrt(e_ground / m) / (lam * g),
            "doppler_ratio_doppler": mpmath.sqrt(e_doppler / m) / (lam * g),
            "x_ground": x_param(3 * e_ground),
            "x_doppler": x_param(3 * e_doppler),
            "r_bound": mpmath.log(g / (mpmath.sqrt(2) * w)) / 2,
        }
        return {k: float(v) for k, v in out.items()}
