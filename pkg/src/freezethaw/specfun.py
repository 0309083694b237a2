"""Special functions: integer-order Bessel J, the ratio J1(2 tau)/tau, exact factorials.

Exact rational values use :class:`fractions.Fraction`, exported here as
``Rational``; it keeps numerator and denominator as Python big integers in
lowest terms with a positive denominator.
"""
from fractions import Fraction
from math import factorial

import numpy as np

from . import kernels
from .errors import DomainError

Rational = Fraction

MAX_ORDER = 4

# below this tau the ratio is summed from its own series (no 0/0 at tau = 0)
_RATIO_SERIES_LIMIT = 2.5


def bessel_j(order, x):
    """Bessel function of the first kind J_order(x).

    Parameters
    ----------
    order : int
        Integer order, 0 through 4.
    x : float or array_like
        Non-negative, finite argument(s).

    Returns
    -------
    float or ndarray
        Scalar for scalar input.  Absolute error is below 1e-12 for x <= 200.
    """
    if int(order) != order or not 0 <= order <= MAX_ORDER:
        raise DomainError(f"bessel_j supports integer orders 0..{MAX_ORDER}, got {order!r}")
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError("bessel_j argument must be finite")
    if np.any(arr < 0):
        raise DomainError("bessel_j argument must be non-negative")
    out = kernels.bessel_jn(int(order), np.ascontiguousarray(arr.ravel())).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def _ratio_series(tau):
    # J1(2t)/t = sum_k (-1)^k t^(2k) / (k! (k+1)!)
    term = np.ones_like(tau)
    total = term.copy()
    q = -tau * tau
    for k in range(1, 200):
        term *= q / (k * (k + 1))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def j1_ratio(tau):
    """J1(2 tau) / tau, continuous at 0 where it equals 1.

    This is the return amplitude of the infinite chain.
    """
    t = np.asarray(tau, dtype=np.float64)
    # even in tau
    flat = np.abs(t.ravel())
    out = np.empty_like(flat)
    small = flat < _RATIO_SERIES_LIMIT
    if small.any():
        out[small] = _ratio_series(flat[small])
    if (~small).any():
        big = flat[~small]
        out[~small] = kernels.bessel_jn(1, np.ascontiguousarray(2.0 * big)) / big
    out = out.reshape(t.shape)
    return float(out) if out.ndim == 0 else out


def j1_ratio_derivative(tau):
    """d/dtau [J1(2 tau)/tau] = -2 J2(2 tau)/tau, from d/dx[J1(x)/x] = -J2(x)/x."""
    t = np.asarray(tau, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(t == 0, 0.0, -2.0 * bessel_j(2, 2.0 * np.abs(t)) / np.where(t == 0, 1.0, t))
    return float(out) if out.ndim == 0 else out


def bessel_derivative_identity_check(tau, h):
    """Identity-based derivative of ``j1_ratio`` next to a central difference.

    Returns
    -------
    (analytic, numeric) : tuple of float
    """
    if tau <= 0 or h <= 0:
        raise DomainError("need tau > 0 and h > 0")
    analytic = j1_ratio_derivative(tau)
    numeric = (j1_ratio(tau + h) - j1_ratio(tau - h)) / (2.0 * h)
    return analytic, numeric


def bessel_j_series_exact(order, x, terms=40):
    """Truncated ascending series for J_order(x) in exact rationals.

    ``x`` is converted exactly (floats are dyadic rationals).
    """
    half = Fraction(x) / 2
    total = Fraction(0)
    for k in range(terms):
        total += (-1) ** k * half ** (2 * k + order) / (factorial(k) * factorial(k + order))
    return total


def j1_ratio_series_exact(tau, terms=60):
    """Truncated series of J1(2 tau)/tau in exact rationals."""
    t2 = Fraction(tau) ** 2
    return sum(
        (-1) ** k * t2**k / (factorial(k) * factorial(k + 1)) for k in range(terms)
    )


def first_j1_ratio_zero(lo=1.0, hi=2.5, tol=1e-13):
    """Smallest positive root of J1(2 tau)/tau, by bisection on the exact series."""

    def sign(t):
        return j1_ratio_series_exact(t, terms=60) > 0

    s_lo = sign(lo)
    if s_lo == sign(hi):
        raise DomainError("bracket does not contain a sign change")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if sign(mid) == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def gamma_int(n):
    """Gamma(n) = (n-1)! for positive integer n, as an exact int."""
    if n < 1:
        raise DomainError("gamma_int is defined here for positive integers only")
    return factorial(n - 1)


def reciprocal_gamma_int(n):
    """1/Gamma(n) as an exact rational, zero at the poles n <= 0."""
    return Fraction(0) if n < 1 else Fraction(1, factorial(n - 1))


def infinite_taylor_coeff(m):
    """Exact coefficient 1/(m! (m+1)!) of (-tau^2)^m in J1(2 tau)/tau."""
    if m < 0:
        raise DomainError("m must be non-negative")
    return Fraction(1, factorial(m) * factorial(m + 1))
