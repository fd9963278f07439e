import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from photoabsorb import AtomSpec, PulseSpec
from photoabsorb.constants import C
from photoabsorb.errors import RangeError, SingularityError
from photoabsorb.photon_field import (
    dipole_pattern,
    photon_amplitude,
    photon_amplitude_instantaneous,
    photon_amplitude_near_origin,
    standing_pattern,
    weak_integrand,
)

ATOM = AtomSpec(5.1e15, 1.2e8, 174 * 1.66053906660e-27)
PULSE = PulseSpec.for_gamma(ATOM.gamma, 20.0)
K = ATOM.omega_eg / C


def point(eta, theta, phi=0.3):
    r = eta / K
    return r * np.array(
        [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
    )


class TestDipolePattern:
    def test_polar_vanishes_on_axis(self):
        for theta in (0.0, math.pi):
            p = dipole_pattern(1.3, theta)
            assert abs(p.component_theta) < 1e-16

    def test_equator_unit_argument(self):
        p = dipole_pattern(1.0, math.pi / 2, "+")
        with mpmath.workdps(30):
            u = mpmath.mpf(1)
            polar = -mpmath.mpf(1) / 2 * (1 / u**2 - 1j * (1 / u - 1 / u**3))
        assert abs(p.component_r) < 1e-16
        assert p.component_theta == pytest.approx(complex(polar), abs=1e-15)
        assert p.component_theta == pytest.approx(-0.5, abs=1e-15)

    def test_far_field_asymptotics(self):
        theta = 0.7
        for u in (1e3, 1e5):
            p = dipole_pattern(u, theta)
            assert p.component_theta * u == pytest.approx(0.5j * math.sin(theta), rel=2 / u)
            assert abs(p.component_r) * u * u == pytest.approx(abs(math.cos(theta)), rel=2 / u)

    @given(st.floats(1e-3, 1e3), st.floats(0.0, math.pi))
    def test_conjugation(self, u, theta):
        plus, minus = dipole_pattern(u, theta, "+"), dipole_pattern(u, theta, "-")
        assert minus.component_r == pytest.approx(np.conj(plus.component_r), rel=1e-12, abs=1e-300)
        assert minus.component_theta == pytest.approx(np.conj(plus.component_theta), rel=1e-12, abs=1e-300)

    def test_origin_singular(self):
        with pytest.raises(SingularityError):
            dipole_pattern(0.0, 0.5)

    def test_complex_argument(self):
        p = dipole_pattern(1.0 + 1e-3j, 0.4)
        assert np.iscomplexobj(p.component_r)

    def test_vectorised(self):
        u = np.linspace(0.5, 2.0, 5)
        p = dipole_pattern(u, 0.3)
        assert p.component_r.shape == (5,)


class TestStandingPattern:
    def test_series_matches_closed_form_at_switch(self):
        theta = 1.1
        for u in (0.011, 0.02, 0.05):
            series_r = math.cos(theta) * (2 / 3 - u * u / 15 + u**4 / 420)
            p = standing_pattern(u, theta)
            assert p.component_r.real == pytest.approx(series_r, rel=1e-8)

    def test_continuous_across_switch(self):
        theta = 0.8
        lo = standing_pattern(0.01 * (1 - 1e-9), theta)
        hi = standing_pattern(0.01 * (1 + 1e-9), theta)
        assert lo.component_r == pytest.approx(hi.component_r, rel=1e-10)
        assert lo.component_theta == pytest.approx(hi.component_theta, rel=1e-10)

    def test_origin_value(self):
        p = standing_pattern(0.0, 0.0)
        assert 1.5 * p.along_dipole() == pytest.approx(1.0)


class TestPhotonAmplitude:
    def test_zero_after_both_branches(self):
        amp = photon_amplitude(point(0.1, 0.4), PULSE.t_out + 1e-9, ATOM, PULSE)
        assert np.all(amp.vector == 0)

    @pytest.mark.parametrize("gdt", [0.0, 0.5, 3.0, 15.0])
    def test_origin_calibration(self, gdt):
        t = PULSE.t_out - gdt / ATOM.gamma
        amp = photon_amplitude(np.zeros(3), t, ATOM, PULSE)
        assert amp.magnitude == pytest.approx(math.exp(-gdt / 2), rel=1e-12)
        assert abs(amp.vector[0]) == 0 and abs(amp.vector[1]) == 0

    def test_matches_near_origin(self):
        x = point(0.1, 0.9)
        # inside |t - t_out| < r/c only the outgoing branch is on, so compare
        # just before the light-cone window opens
        t = PULSE.t_out - 2 * np.linalg.norm(x) / C
        full = photon_amplitude(x, t, ATOM, PULSE).vector
        near = photon_amplitude_near_origin(x, t, ATOM, PULSE).vector
        assert np.linalg.norm(full - near) / np.linalg.norm(near) < 1e-3

    def test_light_cone_window(self):
        x = point(0.1, 0.9)
        amp = photon_amplitude(x, PULSE.t_out, ATOM, PULSE)
        assert amp.t_plus < 0 < amp.t_minus
        assert amp.magnitude > 0

    def test_series_residual_scales_as_eta4(self):
        t = PULSE.t_out - 1.0 / ATOM.gamma
        coeffs = []
        for eta in (0.05, 0.1, 0.2):
            worst = 0.0
            for theta in np.linspace(0.0, math.pi, 13):
                x = point(eta, theta)
                full = photon_amplitude(x, t, ATOM, PULSE).vector
                near = photon_amplitude_near_origin(x, t, ATOM, PULSE).vector
                worst = max(worst, np.linalg.norm(full - near))
            coeffs.append(worst / eta**4)
        assert max(coeffs) / min(coeffs) < 2

    def test_retardation_guard(self):
        far = np.array([0.0, 0.0, 2e-3 * C / ATOM.gamma])
        with pytest.raises(RangeError):
            photon_amplitude(far, PULSE.t0, ATOM, PULSE)


class TestNearOrigin:
    def test_pure_dipole_at_origin(self):
        amp = photon_amplitude_near_origin(np.zeros(3), PULSE.t_out, ATOM, PULSE)
        np.testing.assert_allclose(amp.vector, [0, 0, 1], atol=1e-15)

    def test_longitudinal_suppression(self):
        eta = 0.2
        amp = photon_amplitude_near_origin(point(eta, 0.0), PULSE.t_out, ATOM, PULSE)
        assert amp.vector[2].real == pytest.approx(1 - eta**2 / 10, rel=1e-14)

    @staticmethod
    def _split(vec, theta, phi=0.3):
        """Coefficients ``a, b`` of ``vec = a e_z + b e_theta`` (theta off the equator)."""
        e_r = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
        e_t = np.array([math.cos(theta) * math.cos(phi), math.cos(theta) * math.sin(phi), -math.sin(theta)])
        comp_r, comp_t = np.dot(vec, e_r), np.dot(vec, e_t)
        a = comp_r / math.cos(theta)
        return a, comp_t + math.sin(theta) * a

    def test_transverse_ratio(self):
        eta, theta = 0.1, math.pi / 3
        t = PULSE.t_out - 2 * eta / K / C
        target = (eta**2 / 10) / (1 - eta**2 / 10)
        assert target == pytest.approx(1.001e-3, rel=1e-4)
        near = photon_amplitude_near_origin(point(eta, theta), t, ATOM, PULSE).vector
        a, b = self._split(near, theta)
        assert abs(b / (a * math.sin(theta))) == pytest.approx(target, rel=1e-12)
        full = photon_amplitude(point(eta, theta), t, ATOM, PULSE).vector
        a, b = self._split(full, theta)
        assert abs(b / (a * math.sin(theta))) == pytest.approx(target, rel=1e-3)

    def test_equator_combines_along_dipole(self):
        # e_theta = -e_z at theta = pi/2, so both terms add along the axis
        eta = 0.1
        amp = photon_amplitude_near_origin(point(eta, math.pi / 2), PULSE.t_out, ATOM, PULSE)
        np.testing.assert_allclose(amp.vector, [0, 0, 1 - eta**2 / 5], atol=1e-15)

    def test_range_guard(self):
        with pytest.raises(RangeError):
            photon_amplitude_near_origin(point(0.3, 0.2), PULSE.t_out, ATOM, PULSE)


class TestInstantaneous:
    def test_profile_time_independent(self):
        xs = [point(eta, th) for eta, th in [(0.2, 0.3), (1.0, 1.2), (2.5, 2.9)]]
        t1, t2 = PULSE.t_out - 0.3 / ATOM.gamma, PULSE.t_out - 4.0 / ATOM.gamma
        ratios = []
        for x in xs:
            a1 = photon_amplitude_instantaneous(x, t1, ATOM, PULSE).vector
            a2 = photon_amplitude_instantaneous(x, t2, ATOM, PULSE).vector
            k = np.argmax(np.abs(a2))
            np.testing.assert_allclose(a1, a1[k] / a2[k] * a2, rtol=1e-12, atol=1e-15)
            ratios.append(a1[k] / a2[k])
        np.testing.assert_allclose(ratios, ratios[0], rtol=1e-12)

    def test_small_eta_limit(self):
        t = PULSE.t_out - 2.0 / ATOM.gamma
        for eta in (0.02, 0.05):
            x = point(eta, 0.6)
            inst = photon_amplitude_instantaneous(x, t, ATOM, PULSE).vector
            near = photon_amplitude_near_origin(x, t, ATOM, PULSE).vector
            assert np.linalg.norm(inst - near) < 0.05 * eta**4

    def test_projection_equals_weak_integrand(self):
        x = point(1.0, math.pi / 2)
        amp = photon_amplitude_instantaneous(x, PULSE.t_out, ATOM, PULSE)
        proj = amp.along()
        assert abs(proj.imag) < 1e-15
        assert proj.real**2 == pytest.approx(float(weak_integrand(1.0, 0.0)), rel=1e-12)
        # direct substitution of the closed form at u = 1, theta = pi/2
        u = 1.0
        longitudinal = math.cos(u) / u**2 + math.sin(u) * (1 / u - 1 / u**3)
        assert proj.real == pytest.approx(1.5 * longitudinal, rel=1e-12)

    def test_zero_after_t_out(self):
        amp = photon_amplitude_instantaneous(point(0.5, 1.0), PULSE.t_out * 1.01, ATOM, PULSE)
        assert amp.magnitude == 0

    def test_normalisation_uniform(self):
        cos_t = np.linspace(-1, 1, 41)
        vals = weak_integrand(np.full_like(cos_t, 1e-3), cos_t)
        assert np.max(np.abs(vals - 1)) < 1e-6
