"""First Born amplitude and the lambda-resummed Born amplitude.

born1_amplitude is the plain first-order form

    f_B(q) = -(m/(2 pi hbar^2)) Vtilde(q),

always expressed through potentials.fourier3d, never re-derived inline.

born_resummed_amplitude evaluates the resummed series

    f = -(m/(2 pi hbar^2)) int d^3r e^{-i q.r} V(r)
        int_0^1 dlambda exp{-(i lambda/(hbar v)) int dz' V(x, y, z')},

which for a radial potential collapses to a Hankel integral over the
impact parameter of w(b) * Lambda(chi(b)), where w(b) = int_-inf^inf V dz,
chi(b) = -w(b)/(hbar v), and Lambda(x) = (e^{ix}-1)/(ix) is the closed form
of the lambda integral. w(b) is integrated here, independently of the
eikonal module's phase routes, so the documented equality of the two
amplitudes at small angle is a genuine cross-check of both pipelines.
"""

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from .eikonal import Amplitude, momentum_transfer
from .errors import DomainError
from .potentials import TabulatedRadial, evaluate, fourier3d
from .quadrature import (DEFAULT_SETTINGS, QuadratureSettings, hankel0,
                         integrate_adaptive, integrate_semi_infinite)

__all__ = [
    "BornSettings",
    "born1_amplitude",
    "born_resummed_amplitude",
]


@dataclass(frozen=True)
class BornSettings:
    """lambda_nodes sets the Gauss-Legendre order for the numeric-lambda
    cross-check mode; spatial carries the quadrature tolerances."""

    lambda_nodes: int = 12
    spatial: QuadratureSettings = field(default_factory=QuadratureSettings)

    def __post_init__(self):
        if self.lambda_nodes < 4:
            raise DomainError("lambda_nodes must be >= 4")


DEFAULT_BORN = BornSettings()


def born1_amplitude(p, kin, theta):
    """First Born amplitude at one angle, q = 2k sin(theta/2)."""
    theta = float(theta)
    q = float(momentum_transfer(kin.k, theta))
    vt = fourier3d(p, q)
    value = -(kin.mass / (2.0 * np.pi * kin.hbar**2)) * vt
    return Amplitude(theta=theta, q=q, value=complex(value),
                     error_estimate=0.0)


def _z_profile(p, b, settings):
    """w(b) = int_{-inf}^{inf} V(sqrt(b^2+z^2)) dz, by direct quadrature."""
    # relative-tolerance driven for the same reason as the eikonal phase:
    # the tail values are tiny and the callers divide by them
    settings = dataclasses.replace(settings, abs_tol=1e-300)
    if isinstance(p, TabulatedRadial):
        r_hi = p.r[-1]
        if b >= r_hi:
            return 0.0
        z_hi = math.sqrt(r_hi * r_hi - b * b)
        res = integrate_adaptive(
            lambda z: evaluate(p, np.sqrt(b * b + z * z)), 0.0, z_hi,
            settings)
    else:
        res = integrate_semi_infinite(
            lambda z: evaluate(p, np.sqrt(b * b + z * z)), settings)
    return 2.0 * res.value


def _lambda_factor(x):
    """Lambda(x) = (e^{ix} - 1)/(ix), the closed-form lambda integral.

    e^{ix} - 1 is written as -2 sin^2(x/2) + i sin(x) so the real part
    does not cancel; below |x| = 1e-4 the Taylor series takes over.
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)  # dummy where the series is used
    num = -2.0 * np.sin(xs / 2.0) ** 2 + 1j * np.sin(xs)
    direct = num / (1j * xs)
    series = 1.0 + 1j * x / 2.0 - x * x / 6.0 - 1j * x**3 / 24.0
    return np.where(small, series, direct)


def _lambda_factor_numeric(x, nodes):
    """int_0^1 e^{i lambda x} dlambda by Gauss-Legendre, cross-check mode."""
    t, w = np.polynomial.legendre.leggauss(nodes)
    lam = 0.5 * (t + 1.0)
    wl = 0.5 * w
    x = np.asarray(x, dtype=float)
    return np.sum(wl * np.exp(1j * np.outer(x, lam)), axis=-1)


def born_resummed_amplitude(p, kin, theta, settings=DEFAULT_BORN, *,
                            lambda_numeric=False):
    """Resummed Born amplitude at one (small) angle.

    lambda_numeric swaps the closed-form lambda integral for an explicit
    lambda_nodes-point rule; the two must agree to quadrature accuracy.
    """
    theta = float(theta)
    if not 0.0 <= theta < np.pi:
        raise DomainError("theta must lie in [0, pi)")
    q = float(momentum_transfer(kin.k, theta))
    hv = kin.hbar * kin.v
    spatial = settings.spatial

    def g(b):
        b = np.atleast_1d(np.asarray(b, dtype=float))
        w = np.array([_z_profile(p, float(bi), spatial) for bi in b])
        x = -w / hv
        if lambda_numeric:
            lam = _lambda_factor_numeric(x, settings.lambda_nodes)
        else:
            lam = _lambda_factor(x)
        return w * lam

    res = hankel0(g, q, spatial)
    value = -(kin.mass / kin.hbar**2) * complex(res.value)
    err = (kin.mass / kin.hbar**2) * res.error_estimate
    return Amplitude(theta=theta, q=q, value=value, error_estimate=err)
