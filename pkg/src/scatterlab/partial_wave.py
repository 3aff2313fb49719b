"""Exact partial-wave oracle: radial Schrodinger phase shifts by Numerov.

Solves u_l'' = [l(l+1)/r^2 + 2 m V/hbar^2 - k^2] u_l outward from the
origin for every l at once (the per-l integrations are independent; they
are carried as one vectorized state with deterministic assembly), then
extracts tan(delta_l) by matching u_l/r against the free combination
cos(delta) j_l(kr) - sin(delta) n_l(kr) at two radii a quarter local
wavelength apart.

The reported delta_l live in (-pi/2, pi/2]; the amplitude only ever uses
e^{2 i delta}, for which the mod-pi reduction is exact.
"""

import math
from dataclasses import dataclass

import numpy as np

from .eikonal import Amplitude, Kinematics, momentum_transfer
from .errors import ConvergenceError, DomainError, RangeError
from .potentials import TabulatedRadial, evaluate, origin_expansion
from .quadrature import (QuadratureSettings, integrate_adaptive,
                         integrate_semi_infinite)
from .special_functions import legendre_p_row, spherical_bessel

__all__ = [
    "PhaseShiftSet",
    "effective_radius",
    "phase_shifts",
    "amplitude_partial_wave",
]

# decay criterion on the reduced potential: |V(r_max)| 2m/hbar^2 <= DECAY k^2
_DECAY = 1e-12
_TAIL_TOL = 1e-8  # |delta_{l_max}| below this counts as converged


@dataclass(frozen=True, eq=False)
class PhaseShiftSet:
    """Phase shifts delta_l for l = 0..l_max at one wavenumber."""

    k: float
    l_max: int
    delta: np.ndarray
    r_max: float
    dr: float

    def __post_init__(self):
        if not (np.isfinite(self.k) and self.k > 0):
            raise DomainError("k must be positive and finite")
        if self.l_max < 0 or self.l_max != int(self.l_max):
            raise DomainError("l_max must be an integer >= 0")
        d = np.asarray(self.delta, dtype=float)
        object.__setattr__(self, "delta", d)
        if d.ndim != 1 or d.shape[0] != self.l_max + 1:
            raise DomainError("delta must hold l_max + 1 entries")
        if not np.all(np.isfinite(d)):
            raise DomainError("delta must be finite")
        if abs(d[-1]) >= _TAIL_TOL:
            raise DomainError(
                f"partial-wave tail not converged: |delta_l_max| = "
                f"{abs(d[-1]):.3e} >= {_TAIL_TOL:g}; increase l_max")
        if not (self.r_max > 0 and self.dr > 0):
            raise DomainError("r_max and dr must be positive")


def effective_radius(p, fraction=0.9999):
    """Radius enclosing the given fraction of the weight int |V| r^2 dr."""
    settings = QuadratureSettings(rel_tol=1e-9, abs_tol=1e-300)

    def w(r):
        return np.abs(evaluate(p, r)) * r * r

    if isinstance(p, TabulatedRadial):
        r_hi = float(p.r[-1])
        total = integrate_adaptive(w, 0.0, r_hi, settings).value
    else:
        r_hi = 1.0
        total = integrate_semi_infinite(w, settings).value
        if total > 0.0:
            while integrate_adaptive(w, 0.0, r_hi, settings).value \
                    < fraction * total:
                r_hi *= 2.0
                if r_hi > 1e12:
                    raise RangeError("potential weight does not accumulate; "
                                     "no effective radius")
    if total <= 0.0:
        return 0.0
    target = fraction * total
    lo, hi = 0.0, r_hi
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if integrate_adaptive(w, 0.0, mid, settings).value < target:
            lo = mid
        else:
            hi = mid
    return hi


def _reduced_strength(p, kin, r):
    return abs(float(evaluate(p, r))) * 2.0 * kin.mass / kin.hbar**2


def _auto_r_max(p, kin, r_eff):
    bound = _DECAY * kin.k**2
    r = max(r_eff, 2.0 * np.pi / kin.k, 1.0)
    while _reduced_strength(p, kin, r) > bound:
        r += 0.25
        if r > 500.0:
            raise RangeError("potential does not decay below the matching "
                             "threshold within r = 500")
    return r


def _numerov_deltas(p, kin, l_arr, r_max, dr):
    """Phase shifts for the given array of l values, one radial sweep."""
    k = kin.k
    h = dr
    h2 = h * h
    two_m = 2.0 * kin.mass / kin.hbar**2

    i_a = int(round(r_max / dr))
    i_delta = max(1, int(round((np.pi / (2.0 * k)) / dr)))
    i_b = i_a + i_delta
    n_pts = i_b  # the loop's final step lands exactly on r = i_b dr

    r = dr * np.arange(0, n_pts + 1, dtype=float)  # r[0] = 0 never used
    base = np.empty(n_pts + 1)
    base[0] = 0.0
    base[1:] = two_m * np.asarray(evaluate(p, r[1:]), dtype=float) - k * k
    inv_r2 = np.zeros(n_pts + 1)
    inv_r2[1:] = 1.0 / (r[1:] * r[1:])

    if np.all(base[1:] == -k * k):
        # free equation: nothing scatters
        return np.zeros(l_arr.shape[0])

    la = np.asarray(l_arr, dtype=float)
    ll1 = la * (la + 1.0)

    # series start u = (r/r_1)^{l+1} (1 + c1 r + c2 r^2 + c3 r^3) from the
    # origin expansion V ~ v_m1/r + v_0 + v_1 r
    v_m1, v_0, v_1 = origin_expansion(p)
    um1, u0, u1c = two_m * v_m1, two_m * v_0 - k * k, two_m * v_1
    c1 = um1 / (2.0 * la + 2.0)
    c2 = (um1 * c1 + u0) / (2.0 * (2.0 * la + 3.0))
    c3 = (um1 * c2 + u0 * c1 + u1c) / (3.0 * (2.0 * la + 4.0))

    def series(rv, scale_pow):
        return scale_pow * (1.0 + c1 * rv + c2 * rv * rv + c3 * rv**3)

    u_prev = series(r[1], 1.0)
    u_curr = series(r[2], 2.0 ** (la + 1.0))

    f_prev = base[1] + ll1 * inv_r2[1]
    f_curr = base[2] + ll1 * inv_r2[2]
    y_prev = (1.0 - h2 / 12.0 * f_prev) * u_prev
    y_curr = (1.0 - h2 / 12.0 * f_curr) * u_curr

    u_a = None
    for n in range(2, n_pts):
        y_next = 2.0 * y_curr - y_prev + h2 * f_curr * u_curr
        f_next = base[n + 1] + ll1 * inv_r2[n + 1]
        u_next = y_next / (1.0 - h2 / 12.0 * f_next)
        if n + 1 < i_a and np.abs(u_next).max() > 1e250:
            # forbidden-region growth: rescale per l, ratios are preserved
            mask = np.abs(u_next) > 1e250
            scale = np.where(mask, 1e-250, 1.0)
            y_curr = y_curr * scale
            y_next = y_next * scale
            u_next = u_next * scale
        if n + 1 == i_a:
            u_a = u_next.copy()
        y_prev, y_curr = y_curr, y_next
        f_curr = f_next
        u_curr = u_next
    u_b = u_curr

    if u_a is None or not (np.all(np.isfinite(u_a))
                           and np.all(np.isfinite(u_b))):
        raise ConvergenceError(
            "radial integration overflowed despite rescaling",
            estimate=np.nan, error_estimate=np.inf)

    r_a, r_b = r[i_a], r[i_b]
    w_a, w_b = u_a / r_a, u_b / r_b
    deltas = np.empty(la.shape[0])
    for idx, l in enumerate(l_arr):
        j_a, n_a = spherical_bessel(int(l), k * r_a)
        j_b, n_b = spherical_bessel(int(l), k * r_b)
        num = w_a[idx] * j_b - w_b[idx] * j_a
        den = w_a[idx] * n_b - w_b[idx] * n_a
        d = math.atan2(num, den)
        if d > np.pi / 2:
            d -= np.pi
        elif d <= -np.pi / 2:
            d += np.pi
        deltas[idx] = d
    return deltas


def phase_shifts(p, kin, l_max=None, r_max=None, dr=None):
    """Solve for delta_l, l = 0..l_max, with auto defaults for all knobs.

    l_max=None keeps adding partial waves until |delta_l| drops below the
    tail threshold; r_max=None places the matching radius where the
    reduced potential falls below 1e-12 k^2; dr=None picks a step that
    holds the discretization error well under the tail threshold.
    """
    if not isinstance(kin, Kinematics):
        raise DomainError("kin must be a Kinematics instance")
    k = kin.k
    r_eff = effective_radius(p)

    if r_max is None:
        r_max = _auto_r_max(p, kin, r_eff)
    else:
        r_max = float(r_max)
        if r_max <= 0:
            raise DomainError("r_max must be positive")
        if _reduced_strength(p, kin, r_max) > _DECAY * k * k:
            raise RangeError(
                f"potential has not decayed at r_max = {r_max:g}: "
                f"|V| 2m/hbar^2 exceeds 1e-12 k^2 there")
    if dr is None:
        dr = min(0.01 / k, 0.005)
    else:
        dr = float(dr)
        if dr <= 0:
            raise DomainError("dr must be positive")
        if k * dr >= 0.1:
            raise DomainError("k dr must stay below 0.1")
    # keep the matching radius on the grid
    r_max = round(r_max / dr) * dr

    if l_max is not None:
        if l_max < 0 or l_max != int(l_max):
            raise DomainError("l_max must be an integer >= 0")
        l_arr = np.arange(0, int(l_max) + 1)
        deltas = _numerov_deltas(p, kin, l_arr, r_max, dr)
        return PhaseShiftSet(k=k, l_max=int(l_max), delta=deltas,
                             r_max=r_max, dr=dr)

    l0 = int(np.ceil(k * r_eff)) + 10
    l_arr = np.arange(0, l0 + 1)
    deltas = _numerov_deltas(p, kin, l_arr, r_max, dr)
    while abs(deltas[-1]) >= _TAIL_TOL:
        if l_arr[-1] > l0 + 400:
            raise ConvergenceError(
                "partial-wave tail refuses to converge; the potential may "
                "be too long-ranged for this oracle",
                estimate=float(deltas[-1]), error_estimate=abs(deltas[-1]))
        ext = np.arange(l_arr[-1] + 1, l_arr[-1] + 17)
        deltas = np.concatenate([deltas,
                                 _numerov_deltas(p, kin, ext, r_max, dr)])
        l_arr = np.concatenate([l_arr, ext])
    return PhaseShiftSet(k=k, l_max=int(l_arr[-1]), delta=deltas,
                         r_max=r_max, dr=dr)


def amplitude_partial_wave(ps, theta):
    """f(theta) = (1/2ik) sum (2l+1)(e^{2 i delta_l} - 1) P_l(cos theta).

    theta may be a scalar or an array; array input yields an Amplitude
    whose fields are arrays over the same grid.
    """
    scalar = np.isscalar(theta)
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    if np.any(th < 0.0) or np.any(th > np.pi):
        raise DomainError("theta must lie in [0, pi]")
    k = ps.k
    s_mat = (2.0 * np.arange(ps.l_max + 1) + 1.0) * (
        np.exp(2j * ps.delta) - 1.0)
    p_rows = legendre_p_row(ps.l_max, np.cos(th))
    f = np.sum(s_mat[:, None] * p_rows, axis=0) / (2j * k)
    q = momentum_transfer(k, th)
    # truncation bound from the last retained partial wave
    tail = (2.0 * ps.l_max + 1.0) * abs(ps.delta[-1]) / k
    if scalar:
        return Amplitude(theta=float(th[0]), q=float(q[0]),
                         value=complex(f[0]), error_estimate=tail)
    return Amplitude(theta=th, q=q, value=f,
                     error_estimate=tail)
