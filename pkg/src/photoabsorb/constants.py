"""Physical constants (CODATA 2018, SI units) and the Yb-174 reference values."""

import math

HBAR = 1.054571817e-34  # J s
C = 299792458.0  # m / s
EPS0 = 8.8541878128e-12  # F / m
KB = 1.380649e-23  # J / K
AMU = 1.66053906660e-27  # kg

# Yb-174 parameters of the parabolic-mirror trap experiment
YB174_MASS = 174 * AMU
YB174_OMEGA_EG = 5.1e15  # rad / s
YB174_GAMMA = 1.2e8  # 1 / s
YB174_WAVELENGTH = 369e-9  # m, quoted value
YB174_OMEGA_T = 2 * math.pi * 480e3  # rad / s
