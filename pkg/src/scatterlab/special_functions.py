"""Special functions needed by the scattering engines.

Everything here is plain float64 built on math/numpy. Each routine carries an
accuracy contract checked by the test suite against extended-precision
references (which live in the tests only):

    bessel_j0        |err| <= max(abs_tol, rel_tol*|J0|) for |x| <= 1e4
    bessel_k0        same form, x > 0 up to the underflow point of e^{-x}
    legendre_p       exact recurrence, |x| <= 1
    spherical_bessel relative 1e-10 class away from zeros, via the Wronskian

The default profile is rel_tol 1e-12 / abs_tol 1e-13. Scalar in, scalar out;
ndarray in, ndarray out.
"""

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "AccuracySpec",
    "DEFAULT_ACCURACY",
    "bessel_j0",
    "bessel_k0",
    "legendre_p",
    "legendre_p_row",
    "spherical_bessel",
    "j0_zeros",
]

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class AccuracySpec:
    """Error budget a special-function evaluation promises to meet.

    The guarantee is |error| <= max(abs_tol, rel_tol * |true value|), so the
    relative bound applies away from zeros of the function and the absolute
    floor takes over near them.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-13

    def __post_init__(self):
        if not 0 < self.rel_tol <= 1e-6:
            raise DomainError("AccuracySpec rel_tol must lie in (0, 1e-6]")
        if not 0 <= self.abs_tol <= 1e-6:
            raise DomainError("AccuracySpec abs_tol must lie in [0, 1e-6]")


DEFAULT_ACCURACY = AccuracySpec()


# ---------------------------------------------------------------------------
# J0: power series below the branch point, Hankel-form rational fit beyond.
# The |x| >= 8 branch uses the Cephes (Moshier) rational coefficients for the
# modulus/phase functions; the series branch is summed exactly with fsum so
# the x = 8 seam agrees to well under 1e-12.
# ---------------------------------------------------------------------------

_J0_BRANCH = 8.0

_PP = (7.96936729297347051624e-4, 8.28352392107440799803e-2,
       1.23953371646414299388e0, 5.44725003058768775090e0,
       8.74716500199817011941e0, 5.30324038235394892183e0,
       9.99999999999999997821e-1)
_PQ = (9.24408810558863637013e-4, 8.56288474354474431428e-2,
       1.25352743901058953537e0, 5.47097740330417105182e0,
       8.76190883237069594232e0, 5.30605288235394617618e0,
       1.00000000000000000218e0)
_QP = (-1.13663838898469149931e-2, -1.28252718670509318512e0,
       -1.95539544257735972385e1, -9.32060152123768231369e1,
       -1.77681167980488050595e2, -1.47077505154951170175e2,
       -5.14105326766599330220e1, -6.05014350600728481186e0)
_QQ = (6.43178256118178023184e1, 8.56430025976980587198e2,
       3.88240183605401609683e3, 7.24046774195652478189e3,
       5.93072701187316984827e3, 2.06209331660327847417e3,
       2.42005740240291393179e2)
_SQ2OPI = 7.9788456080286535587989e-1
_PIO4 = 0.78539816339744830962


def _polevl(x, coeffs):
    r = coeffs[0]
    for c in coeffs[1:]:
        r = r * x + c
    return r


def _p1evl(x, coeffs):
    r = x + coeffs[0]
    for c in coeffs[1:]:
        r = r * x + c
    return r


def _j0_series(x):
    # Sum_{n} (-x^2/4)^n / (n!)^2, exact accumulation. Largest intermediate
    # term at x=8 is ~114, so fsum keeps the cancellation at the eps level.
    w = -0.25 * x * x
    term = 1.0
    terms = [term]
    n = 0
    while abs(term) > 1e-20 and n < 60:
        n += 1
        term *= w / (n * n)
        terms.append(term)
    return math.fsum(terms)


def _j0_asymptotic(x):
    z = 25.0 / (x * x)
    p = _polevl(z, _PP) / _polevl(z, _PQ)
    q = _polevl(z, _QP) / _p1evl(z, _QQ)
    xn = x - _PIO4
    p = p * np.cos(xn) - (5.0 / x) * q * np.sin(xn)
    return _SQ2OPI * p / np.sqrt(x)


def bessel_j0(x, spec=DEFAULT_ACCURACY):
    """Bessel function of the first kind, order zero. Even in x."""
    if np.isscalar(x):
        xf = float(x)
        if not math.isfinite(xf):
            raise DomainError("bessel_j0 requires finite input")
        ax = abs(xf)
        if ax < _J0_BRANCH:
            return _j0_series(ax)
        return float(_j0_asymptotic(ax))
    ax = np.abs(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(ax)):
        raise DomainError("bessel_j0 requires finite input")
    out = np.empty_like(ax)
    small = ax < _J0_BRANCH
    if small.any():
        out[small] = [_j0_series(v) for v in ax[small]]
    if (~small).any():
        out[~small] = _j0_asymptotic(ax[~small])
    return out


# ---------------------------------------------------------------------------
# K0: defining series on (0, 2], exponentially scaled integral beyond.
# For x > 2 the cosh representation K0 = int_0^inf e^{-x cosh t} dt becomes,
# after u = sqrt(cosh t - 1) and u = s/sqrt(x),
#     K0(x) = 2 e^{-x} / sqrt(x) * int_0^inf e^{-s^2} / sqrt(s^2/x + 2) ds,
# a Gaussian-weighted analytic integrand that the trapezoid rule nails at
# spectral accuracy with a fixed step (worst case is the x = 2 seam).
# ---------------------------------------------------------------------------

_K0_BRANCH = 2.0
_K0_H = 0.32
_K0_S = _K0_H * np.arange(0, int(np.ceil(6.8 / _K0_H)) + 1)
_K0_EXP = np.exp(-_K0_S * _K0_S)
_K0_W = np.where(_K0_S == 0.0, 0.5, 1.0) * _K0_EXP * _K0_H


def _k0_series(x):
    # K0 = -(log(x/2) + gamma) I0(x) + sum_{n>=1} (x^2/4)^n / (n!)^2 * H_n
    # All series terms are positive for x <= 2; no cancellation.
    w = 0.25 * x * x
    term = np.ones_like(x)
    i0 = np.ones_like(x)
    hsum = np.zeros_like(x)
    h = 0.0
    for n in range(1, 18):
        term = term * w / (n * n)
        h += 1.0 / n
        i0 = i0 + term
        hsum = hsum + term * h
    return -(np.log(0.5 * x) + EULER_GAMMA) * i0 + hsum


def _k0_scaled_tail(x):
    # x may be an ndarray; returns K0(x) for x > 2.
    xs = np.asarray(x, dtype=float)
    grid = _K0_S * _K0_S
    val = (_K0_W / np.sqrt(grid[None, :] / xs[..., None] + 2.0)).sum(axis=-1)
    return 2.0 * np.exp(-xs) / np.sqrt(xs) * val


def bessel_k0(x, spec=DEFAULT_ACCURACY):
    """Modified Bessel function of the second kind, order zero. x > 0."""
    scalar = np.isscalar(x)
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)) or (xa <= 0).any():
        raise DomainError("bessel_k0 requires finite x > 0")
    out = np.empty_like(xa)
    small = xa <= _K0_BRANCH
    if small.any():
        out[small] = _k0_series(xa[small])
    if (~small).any():
        out[~small] = _k0_scaled_tail(xa[~small])
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# Legendre polynomials and spherical Bessel functions.
# ---------------------------------------------------------------------------


def legendre_p(l, x):
    """Legendre polynomial P_l(x) for |x| <= 1, by upward recurrence."""
    if l < 0 or l != int(l):
        raise DomainError("legendre_p requires integer l >= 0")
    scalar = np.isscalar(x)
    xa = np.asarray(x, dtype=float)
    if (np.abs(xa) > 1.0 + 1e-12).any():
        raise DomainError("legendre_p requires |x| <= 1")
    p_prev = np.ones_like(xa)
    if l == 0:
        return float(p_prev) if scalar else p_prev
    p_cur = xa.copy()
    for n in range(1, int(l)):
        p_prev, p_cur = p_cur, ((2 * n + 1) * xa * p_cur - n * p_prev) / (n + 1)
    return float(p_cur) if scalar else p_cur


def legendre_p_row(l_max, x):
    """All of P_0(x)..P_{l_max}(x) stacked along a leading axis."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((l_max + 1,) + xa.shape)
    out[0] = 1.0
    if l_max >= 1:
        out[1] = xa
    for n in range(1, l_max):
        out[n + 1] = ((2 * n + 1) * xa * out[n] - n * out[n - 1]) / (n + 1)
    return out


def spherical_bessel(l, x):
    """Spherical Bessel pair (j_l(x), n_l(x)) for x > 0, integer l >= 0.

    n_l uses the always-stable upward recurrence. j_l goes upward when
    x >= l + 1 and switches to Miller's downward recurrence (normalized
    against j_0) in the classically forbidden region x < l where the upward
    direction is unstable.
    """
    if l < 0 or l != int(l):
        raise DomainError("spherical_bessel requires integer l >= 0")
    l = int(l)
    x = float(x)
    if x <= 0:
        raise DomainError("spherical_bessel requires x > 0")

    sin_x = math.sin(x)
    cos_x = math.cos(x)
    n0 = -cos_x / x
    j0 = sin_x / x
    if l == 0:
        return j0, n0

    n1 = -cos_x / (x * x) - sin_x / x
    n_prev, n_cur = n0, n1
    for i in range(1, l):
        n_prev, n_cur = n_cur, (2 * i + 1) / x * n_cur - n_prev
    nl = n_cur

    j1 = sin_x / (x * x) - cos_x / x
    if l == 1:
        return j1, nl

    if x >= l + 1:
        j_prev, j_cur = j0, j1
        for i in range(1, l):
            j_prev, j_cur = j_cur, (2 * i + 1) / x * j_cur - j_prev
        return j_cur, nl

    # Miller's algorithm: seed high above l, recur down, scale to j_0.
    start = l + 30 + int(x)
    f_next = 0.0
    f_cur = 1e-300
    f_l = 0.0
    for i in range(start, 0, -1):
        f_prev = (2 * i + 1) / x * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        if i - 1 == l:
            f_l = f_cur
        if abs(f_cur) > 1e250:
            f_cur *= 1e-250
            f_next *= 1e-250
            f_l *= 1e-250
    return f_l * (j0 / f_cur), nl


# ---------------------------------------------------------------------------
# Positive zeros of J0, located by bisection. Consecutive gaps increase
# monotonically from 3.115 toward pi, so [previous + 3.0, previous + 3.2]
# always brackets the next zero.
# ---------------------------------------------------------------------------

_J0_ZEROS = []
_J0_ZEROS_LOCK = threading.Lock()


def _bisect_j0(lo, hi):
    flo = _j0_series(lo) if lo < _J0_BRANCH else float(_j0_asymptotic(lo))
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fmid = _j0_series(mid) if mid < _J0_BRANCH else float(_j0_asymptotic(mid))
        if flo * fmid <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
        if hi - lo < 1e-14 * hi:
            break
    return 0.5 * (lo + hi)


def j0_zeros(n):
    """First n positive zeros of J0, cached across calls."""
    if n < 0:
        raise DomainError("j0_zeros requires n >= 0")
    with _J0_ZEROS_LOCK:
        while len(_J0_ZEROS) < n:
            if not _J0_ZEROS:
                lo, hi = 2.0, 3.0
            else:
                lo, hi = _J0_ZEROS[-1] + 3.0, _J0_ZEROS[-1] + 3.2
            _J0_ZEROS.append(_bisect_j0(lo, hi))
        return np.array(_J0_ZEROS[:n])
