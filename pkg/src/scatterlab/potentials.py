"""Radial potential models and their momentum-space transforms.

Three models share one informal protocol: construct, then pass to the
module-level functions. Closed-form transforms exist for the analytic
models; the tabulated model falls back to quadrature over its support.

Conventions: V has energy units, r length units. fourier3d computes
Vtilde(q) = integral d^3r e^{-i q.r} V(r) = (4 pi / q) int_0^inf
sin(q r) V(r) r dr, real for radial V.
"""

import io
import math
from dataclasses import dataclass, field

import numpy as np

from ._spline import CubicSpline1D
from .errors import (ConfigError, DomainError, SingularityError,
                     UnsupportedModelError)
from .quadrature import DEFAULT_SETTINGS, integrate_adaptive

__all__ = [
    "Yukawa",
    "Gauss",
    "TabulatedRadial",
    "evaluate",
    "fourier3d",
    "origin_expansion",
    "load_radial_table",
]


def _require_finite(name, value):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Yukawa:
    """V(r) = g exp(-mu r) / r. Coupling g of either sign, range 1/mu."""

    g: float
    mu: float

    def __post_init__(self):
        _require_finite("g", self.g)
        _require_finite("mu", self.mu)
        if self.mu <= 0.0:
            raise DomainError("Yukawa screening mu must be positive")


@dataclass(frozen=True)
class Gauss:
    """V(r) = g exp(-alpha r^2). Finite at the origin, width 1/sqrt(alpha)."""

    g: float
    alpha: float

    def __post_init__(self):
        _require_finite("g", self.g)
        _require_finite("alpha", self.alpha)
        if self.alpha <= 0.0:
            raise DomainError("Gauss width alpha must be positive")


@dataclass(frozen=True, eq=False)
class TabulatedRadial:
    """Sampled V on strictly increasing radii.

    Below the first sample the value clamps to v[0]; beyond the last it is
    identically zero (the table is taken to cover the interaction region).
    interpolation is "cubic" (natural spline) or "linear".
    """

    r: np.ndarray
    v: np.ndarray
    interpolation: str = "cubic"
    _interp: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if r.ndim != 1 or r.shape != v.shape:
            raise DomainError("table radii and values must be matching "
                              "1-d arrays")
        if r.size < 4:
            raise DomainError("table needs at least four samples")
        if r[0] < 0.0 or not np.all(np.diff(r) > 0.0):
            raise DomainError("table radii must be non-negative and "
                              "strictly increasing")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(v))):
            raise DomainError("table entries must be finite")
        if abs(v[-1]) > 1e-10 * max(1.0, float(np.max(np.abs(v)))):
            raise DomainError("table must decay: the last sample must "
                              "vanish (V -> 0 beyond range)")
        if self.interpolation not in ("cubic", "linear"):
            raise DomainError("interpolation must be 'cubic' or 'linear', "
                              f"got {self.interpolation!r}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "v", v)
        if self.interpolation == "cubic":
            object.__setattr__(self, "_interp", CubicSpline1D(r, v))
        else:
            object.__setattr__(self, "_interp",
                               lambda x: np.interp(x, r, v))


def evaluate(potential, r):
    """V(r), vectorized over r. Negative r is rejected; r = 0 raises for
    models singular at the origin."""
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    r = np.atleast_1d(r)
    if np.any(r < 0.0):
        raise DomainError("radius must be non-negative")
    if isinstance(potential, Yukawa):
        if np.any(r == 0.0):
            raise SingularityError("Yukawa potential is singular at r = 0")
        out = potential.g * np.exp(-potential.mu * r) / r
    elif isinstance(potential, Gauss):
        out = potential.g * np.exp(-potential.alpha * r * r)
    elif isinstance(potential, TabulatedRadial):
        inside = np.clip(r, potential.r[0], potential.r[-1])
        out = np.asarray(potential._interp(inside), dtype=float)
        out = np.where(r > potential.r[-1], 0.0, out)
    else:
        raise UnsupportedModelError(
            f"unknown potential model {type(potential).__name__!r}")
    return float(out[0]) if scalar else out


def fourier3d(potential, q, settings=DEFAULT_SETTINGS):
    """Vtilde(q) = int d^3r e^{-i q.r} V(r), vectorized over q >= 0."""
    q = np.asarray(q, dtype=float)
    scalar = q.ndim == 0
    q = np.atleast_1d(q)
    if np.any(q < 0.0):
        raise DomainError("momentum transfer q must be non-negative")
    if isinstance(potential, Yukawa):
        out = 4.0 * np.pi * potential.g / (q * q + potential.mu**2)
    elif isinstance(potential, Gauss):
        a = potential.alpha
        out = potential.g * (np.pi / a) ** 1.5 * np.exp(-q * q / (4.0 * a))
    elif isinstance(potential, TabulatedRadial):
        r_hi = potential.r[-1]
        out = np.empty(q.shape)
        for i, qi in enumerate(q):
            if qi == 0.0:
                f = lambda r: 4.0 * np.pi * evaluate(potential, r) * r * r
            else:
                f = lambda r: (4.0 * np.pi / qi) * np.sin(qi * r) \
                    * evaluate(potential, r) * r
            out[i] = integrate_adaptive(f, 0.0, r_hi, settings).value
    else:
        raise UnsupportedModelError(
            f"unknown potential model {type(potential).__name__!r}")
    return float(out[0]) if scalar else out


def origin_expansion(potential):
    """Coefficients (c_m1, c_0, c_1) of V(r) ~ c_m1/r + c_0 + c_1 r near
    r = 0, consistent with what evaluate() actually returns there."""
    if isinstance(potential, Yukawa):
        g, mu = potential.g, potential.mu
        return (g, -g * mu, 0.5 * g * mu * mu)
    if isinstance(potential, Gauss):
        return (0.0, potential.g, 0.0)
    if isinstance(potential, TabulatedRadial):
        # evaluate() clamps to v[0] below the first sample
        return (0.0, float(potential.v[0]), 0.0)
    raise UnsupportedModelError(
        f"unknown potential model {type(potential).__name__!r}")


def load_radial_table(source, interpolation="cubic"):
    """Read a two-column (r, V) whitespace table; '#' starts a comment."""
    if isinstance(source, (str, bytes)):
        data = np.loadtxt(source, comments="#", ndmin=2)
    elif isinstance(source, io.IOBase) or hasattr(source, "read"):
        data = np.loadtxt(source, comments="#", ndmin=2)
    else:
        raise ConfigError("radial table source must be a path or file "
                          "object", key="potential.table")
    if data.ndim != 2 or data.shape[1] != 2:
        raise ConfigError("radial table must have exactly two columns "
                          "(r, V)", key="potential.table")
    return TabulatedRadial(r=data[:, 0], v=data[:, 1],
                           interpolation=interpolation)
