"""Independent checks of the analytic chain results.

Three routes that never touch the closed-form spectrum: implicit-QL
diagonalization of the hopping matrix, direct RK4 integration of the
Schroedinger equation, and exact rational Taylor coefficients of c_e.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from . import kernels
from .chain import AmplitudeSeries, Provenance, _check_grid
from .errors import DomainError, NumericError
from .specfun import infinite_taylor_coeff, reciprocal_gamma_int

MAX_DIM = 2001
MAX_TAYLOR = 200


@dataclass(frozen=True)
class HoppingMatrix:
    """Uniform open chain in the single-excitation sector: zero diagonal, equal couplings."""

    dimension: int
    off_diagonal: float = 1.0

    def __post_init__(self):
        if not 2 <= self.dimension <= MAX_DIM:
            raise DomainError(f"dimension must lie in [2, {MAX_DIM}], got {self.dimension}")

    @classmethod
    def for_chain(cls, n_sites_b):
        return cls(n_sites_b + 1)

    @property
    def n_sites_b(self):
        return self.dimension - 1

    def dense(self):
        e = np.full(self.dimension - 1, self.off_diagonal)
        return np.diag(e, 1) + np.diag(e, -1)


def numeric_spectrum(matrix, residual_tol=1e-10):
    """Eigenvalues (descending) and eigenvector columns by implicit-shift QL."""
    d = np.zeros(matrix.dimension)
    e = np.full(matrix.dimension - 1, float(matrix.off_diagonal))
    try:
        vals, vecs = kernels.tql_implicit(d, e)
    except ArithmeticError as exc:
        raise NumericError(str(exc)) from exc
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], np.ascontiguousarray(vecs[:, order])
    # H v for the tridiagonal matrix without forming it
    hv = np.zeros_like(vecs)
    hv[:-1] += matrix.off_diagonal * vecs[1:]
    hv[1:] += matrix.off_diagonal * vecs[:-1]
    residual = np.max(np.linalg.norm(hv - vecs * vals, axis=0))
    if residual > residual_tol:
        raise NumericError(f"eigenpair residual {residual:.2e} above {residual_tol:.0e}")
    return vals, vecs


def spectral_amplitudes(matrix, tau_grid):
    """psi(tau) = sum_k exp(-i lambda_k tau) v_k <v_k|site 1> from the numeric eigensystem."""
    grid = _check_grid(tau_grid)
    vals, vecs = numeric_spectrum(matrix)
    phases = np.exp(-1j * np.outer(grid, vals)) * vecs[0]
    psi = phases @ vecs.T
    return AmplitudeSeries(grid, psi[:, 0], psi[:, 1:], Provenance.ORACLE_DIAGONALIZED, matrix.n_sites_b)


def rk4_fixed(matrix, tau_grid, step):
    """RK4 with steps no longer than ``step``; returns psi on the grid, shape (samples, dim)."""
    grid = _check_grid(tau_grid)
    psi0 = np.zeros(matrix.dimension, dtype=np.complex128)
    psi0[0] = 1.0
    if grid[0] != 0.0:
        grid = np.concatenate([[0.0], grid])
        return kernels.rk4_chain(float(matrix.off_diagonal), psi0, grid, float(step))[1:]
    return kernels.rk4_chain(float(matrix.off_diagonal), psi0, grid, float(step))


def integrate_schrodinger(matrix, tau_grid, tol=1e-9, step=0.02, min_step=1e-5, norm_tol=1e-8):
    """Solve i dpsi/dtau = H psi from the qubit site, halving the step until converged.

    Each attempt integrates with step h and h/2; for a fourth-order method the
    error of the finer run is about |psi_h - psi_h/2| / 15.  The finer run is
    returned once that estimate is below ``tol``.
    """
    grid = _check_grid(tau_grid)
    h = step
    coarse = rk4_fixed(matrix, grid, h)
    while True:
        if h / 2 < min_step:
            raise NumericError(f"step size underflow below {min_step}")
        fine = rk4_fixed(matrix, grid, h / 2)
        if np.max(np.abs(coarse - fine)) / 15.0 <= tol:
            break
        h /= 2
        coarse = fine
    drift = float(np.max(np.abs(np.sum(np.abs(fine) ** 2, axis=1) - 1.0)))
    if drift > norm_tol:
        raise NumericError(f"norm drift {drift:.2e} above {norm_tol:.0e}")
    return AmplitudeSeries(grid, fine[:, 0], fine[:, 1:], Provenance.ORACLE_INTEGRATED, matrix.n_sites_b)


# --- exact Taylor coefficients -------------------------------------------------


def cosine_sum(n_sites_b, r):
    """Exact sum_{k=1}^{N+1} cos(r k pi/(N+2)) for integer r.

    Even r = 2q: N+1 when (N+2) divides q, else -1.  Odd r: 0.
    """
    if r % 2:
        return 0
    return n_sites_b + 1 if (r // 2) % (n_sites_b + 2) == 0 else -1


def cos_power_sum(n_sites_b, n):
    """Exact sum_k cos^n(k pi/(N+2)) via the binomial expansion of cos^n."""
    if n < 0:
        raise DomainError("power must be non-negative")
    if n % 2 == 0:
        half = n // 2
        total = comb(n, half) * cosine_sum(n_sites_b, 0)
        total += 2 * sum(comb(n, l) * cosine_sum(n_sites_b, 2 * (half - l)) for l in range(half))
    else:
        total = 2 * sum(comb(n, l) * cosine_sum(n_sites_b, n - 2 * l) for l in range((n + 1) // 2))
    return Fraction(total, 2**n)


def y_sum(n_sites_b, m):
    """Y_m = sum_k cos^(2m) sin^2 = S(2m) - S(2m+2), exactly."""
    return cos_power_sum(n_sites_b, 2 * m) - cos_power_sum(n_sites_b, 2 * m + 2)


def series_coeff(n_sites_b, n):
    """Coefficient of (-i tau)^n in c_e: 2^(n+1) / ((N+2) n!) * sum_k cos^n sin^2."""
    weighted = cos_power_sum(n_sites_b, n) - cos_power_sum(n_sites_b, n + 2)
    return Fraction(2 ** (n + 1), (n_sites_b + 2) * factorial(n)) * weighted


def finite_taylor_coeff(n_sites_b, m):
    """Exact a_m with c_e(tau) = sum_m a_m (-tau^2)^m for the finite chain."""
    if not 0 <= m <= MAX_TAYLOR or not 1 <= n_sites_b <= MAX_TAYLOR:
        raise DomainError(f"need 0 <= m <= {MAX_TAYLOR} and 1 <= N <= {MAX_TAYLOR}")
    return Fraction(2 ** (2 * m + 1), (n_sites_b + 2) * factorial(2 * m)) * y_sum(n_sites_b, m)


def correction_term(n_sites_b, m, l):
    """l-th finite-size correction to a_m: 2(m + 1 - 2 l^2 (N+2)^2) / (Gamma(m - l(N+2) + 2) Gamma(m + l(N+2) + 2)).

    Nonzero only for m > l(N+2) - 2, so at most one term per N+2 orders of m.
    """
    shift = l * (n_sites_b + 2)
    return (
        2
        * (m + 1 - 2 * shift * shift)
        * reciprocal_gamma_int(m - shift + 2)
        * reciprocal_gamma_int(m + shift + 2)
    )


def corrected_coeff(n_sites_b, m):
    """1/(m!(m+1)!) plus every correction term that is active at this m."""
    total = infinite_taylor_coeff(m)
    l = 1
    while m > l * (n_sites_b + 2) - 2:
        total += correction_term(n_sites_b, m, l)
        l += 1
    return total


@dataclass(frozen=True)
class TaylorComparison:
    m: int
    finite_n_coeff: Fraction
    infinite_coeff: Fraction

    @property
    def equal(self):
        return self.finite_n_coeff == self.infinite_coeff


def taylor_agreement_scan(n_sites_b, m_max):
    """Exact finite-vs-infinite comparison for m = 0..m_max."""
    if not 0 <= m_max <= MAX_TAYLOR:
        raise DomainError(f"m_max must lie in [0, {MAX_TAYLOR}]")
    return [
        TaylorComparison(m, finite_taylor_coeff(n_sites_b, m), infinite_taylor_coeff(m))
        for m in range(m_max + 1)
    ]


def taylor_pattern_holds(scan, n_sites_b):
    """True when coefficients agree for every m <= N and differ at m = N + 1."""
    by_m = {row.m: row for row in scan}
    if n_sites_b + 1 not in by_m:
        raise DomainError("scan must reach m = N + 1")
    return all(by_m[m].equal for m in range(n_sites_b + 1)) and not by_m[n_sites_b + 1].equal
