import math

import pytest

from photoabsorb import AtomSpec, PulseSpec, TrapSpec
from photoabsorb.constants import AMU, C, HBAR
from photoabsorb.physcore import yb174, yb174_trap


@pytest.fixture(scope="session")
def yb_atom():
    return yb174()


@pytest.fixture(scope="session")
def yb_trap():
    return yb174_trap()


def tight_case(gamma_over_omega, eta=0.05):
    """Yb ion in an isotropic trap stiff enough for per-axis Lamb-Dicke ``eta``.

    At 480 kHz the Yb ground state already has eta^2 = 0.0175, so thermal
    and squeezed states would leave the strong-confinement regime.
    """
    mass = 174 * AMU
    omega_eg = 5.1e15
    omega = HBAR * omega_eg**2 / (2 * mass * C**2 * eta**2)
    atom = AtomSpec(omega_eg, gamma_over_omega * omega, mass)
    trap = TrapSpec.isotropic(omega)
    pulse = PulseSpec.for_gamma(atom.gamma, 20.0)
    return atom, trap, pulse


def soft_trap_for_eta0(atom, eta0):
    """Isotropic trap whose ground state has effective Lamb-Dicke ``eta0``."""
    return TrapSpec.isotropic(HBAR * atom.omega_eg**2 / (2 * atom.mass * C**2 * eta0**2))


def report(label, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} {label}" + (f": {detail}" if detail else ""))
    return ok


@pytest.fixture
def rel():
    def _rel(a, b):
        return abs(a - b) / abs(b)

    return _rel


TWO_PI = 2 * math.pi
