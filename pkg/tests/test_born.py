"""Tests for the first Born and resummed Born amplitudes."""

import math

import numpy as np
import pytest

from scatterlab.born import (BornSettings, _lambda_factor, born1_amplitude,
                             born_resummed_amplitude)
from scatterlab.eikonal import Kinematics, amplitude_eikonal
from scatterlab.errors import DomainError
from scatterlab.potentials import Gauss, TabulatedRadial, Yukawa

KIN1 = Kinematics(mass=1.0, k=1.0)
KIN10 = Kinematics(mass=1.0, k=10.0)


class TestBornSettings:
    def test_defaults(self):
        s = BornSettings()
        assert s.lambda_nodes == 12

    def test_minimum_nodes(self):
        BornSettings(lambda_nodes=4)
        with pytest.raises(DomainError):
            BornSettings(lambda_nodes=3)


class TestBorn1:
    def test_yukawa_forward_unit_values(self):
        # m = hbar = mu = g = 1 at q = 0: f = -(1/2pi) * 4pi = -2
        got = born1_amplitude(Yukawa(1.0, 1.0), KIN1, 0.0)
        assert got.value == pytest.approx(-2.0 + 0j, rel=1e-14)

    def test_zero_coupling(self):
        got = born1_amplitude(Yukawa(0.0, 1.0), KIN1, 0.4)
        assert got.value == 0.0

    def test_yukawa_angle_dependence(self):
        # f_B = -2 g m / (hbar^2 (q^2 + mu^2)) with q = 2k sin(theta/2)
        p = Yukawa(0.7, 1.3)
        kin = Kinematics(mass=2.0, k=3.0, hbar=0.8)
        theta = 1.1
        q = 2 * kin.k * math.sin(theta / 2)
        want = -2 * p.g * kin.mass / (kin.hbar**2 * (q * q + p.mu**2))
        got = born1_amplitude(p, kin, theta)
        assert got.value == pytest.approx(want, rel=1e-14)
        assert got.q == pytest.approx(q, rel=1e-15)

    def test_gauss_width(self):
        # ratio of two angles isolates the e^{-q^2/4 alpha} factor
        p = Gauss(1.0, 2.0)
        a1 = born1_amplitude(p, KIN10, 0.1)
        a2 = born1_amplitude(p, KIN10, 0.2)
        want = math.exp(-(a2.q**2 - a1.q**2) / (4 * p.alpha))
        assert (a2.value / a1.value).real == pytest.approx(want, rel=1e-12)

    def test_real_for_real_potential(self):
        for p in (Yukawa(0.5, 1.0), Gauss(-1.0, 0.5)):
            got = born1_amplitude(p, KIN10, 0.3)
            assert got.value.imag == 0.0

    def test_backward_angle_allowed(self):
        got = born1_amplitude(Yukawa(1.0, 1.0), KIN10, math.pi)
        assert got.q == pytest.approx(2 * KIN10.k, rel=1e-15)

    def test_tabulated_matches_parent(self):
        g, alpha = 0.6, 1.0
        r = np.linspace(0.0, 12.0, 2000)
        v = g * np.exp(-alpha * r * r)
        v[-1] = 0.0
        ref = born1_amplitude(Gauss(g, alpha), KIN10, 0.2)
        got = born1_amplitude(TabulatedRadial(r, v), KIN10, 0.2)
        assert abs(got.value - ref.value) / abs(ref.value) < 1e-6


class TestBornResummed:
    def test_matches_eikonal_at_small_angle(self):
        # the resummed series equals the eikonal amplitude identically in
        # the small-angle regime; both pipelines are fully independent
        p = Yukawa(0.5, 1.0)
        for theta in (0.0, 0.02, 0.05, 0.1):
            fe = amplitude_eikonal(p, KIN10, theta)
            fr = born_resummed_amplitude(p, KIN10, theta)
            assert abs(fr.value - fe.value) / abs(fe.value) < 1e-6

    def test_matches_eikonal_gauss(self):
        p = Gauss(0.8, 0.5)
        fe = amplitude_eikonal(p, KIN10, 0.05)
        fr = born_resummed_amplitude(p, KIN10, 0.05)
        assert abs(fr.value - fe.value) / abs(fe.value) < 1e-6

    def test_lambda_numeric_cross_check(self):
        p = Yukawa(0.5, 1.0)
        f1 = born_resummed_amplitude(p, KIN10, 0.05)
        f2 = born_resummed_amplitude(p, KIN10, 0.05, lambda_numeric=True)
        assert abs(f2.value - f1.value) / abs(f1.value) < 1e-10

    def test_difference_from_born1_is_second_order(self):
        # |f_resummed - f_born1| must scale as g^2: halving g divides the
        # difference by 4, i.e. log2 ratio = 2 within 0.1
        theta = 0.05
        diffs = []
        for g in (0.04, 0.02, 0.01):
            p = Yukawa(g, 1.0)
            d = abs(born_resummed_amplitude(p, KIN10, theta).value
                    - born1_amplitude(p, KIN10, theta).value)
            diffs.append(d)
        for i in range(2):
            slope = math.log2(diffs[i] / diffs[i + 1])
            assert slope == pytest.approx(2.0, abs=0.1)

    def test_richardson_limit_is_born1(self):
        # f_eik(g)/g = f_B/g + O(g) + O(g^2); three couplings in ratio
        # 1 : 1/2 : 1/4 eliminate both correction orders
        theta = 0.1
        for p1 in (Yukawa(1.0, 1.0), Gauss(1.0, 1.0)):
            vals = []
            for g in (1e-2, 5e-3, 2.5e-3):
                if isinstance(p1, Yukawa):
                    pg = Yukawa(g, p1.mu)
                else:
                    pg = Gauss(g, p1.alpha)
                vals.append(amplitude_eikonal(pg, KIN10, theta).value / g)
            v0, v1, v2 = vals
            extrap = (8 * v2 - 6 * v1 + v0) / 3.0
            ref = born1_amplitude(p1, KIN10, theta).value / 1.0
            assert abs(extrap - ref) / abs(ref) < 1e-4

    def test_theta_domain(self):
        with pytest.raises(DomainError):
            born_resummed_amplitude(Gauss(1.0, 1.0), KIN1, math.pi)

    def test_error_estimate_reported(self):
        got = born_resummed_amplitude(Yukawa(0.5, 1.0), KIN10, 0.05)
        assert 0.0 <= got.error_estimate < 1e-8


class TestLambdaFactor:
    def test_at_zero(self):
        assert complex(_lambda_factor(0.0)) == 1.0 + 0j

    def test_series_direct_seam(self):
        # series takes over below |x| = 1e-4; check both branches against
        # the cancellation-free form (cos x - 1 + i sin x)/(ix)
        for x in (9.9e-5, 1.01e-4, -9.9e-5, -1.01e-4):
            ref = (-2 * math.sin(x / 2) ** 2 + 1j * math.sin(x)) / (1j * x)
            assert abs(complex(_lambda_factor(x)) - ref) < 1e-14

    def test_moderate_argument(self):
        x = 2.3
        want = (np.exp(1j * x) - 1.0) / (1j * x)
        assert complex(_lambda_factor(x)) == pytest.approx(want, rel=1e-15)
