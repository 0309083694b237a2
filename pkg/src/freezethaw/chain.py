"""Single-excitation dynamics of the uniform open XY chain.

Site 1 is the qubit A, sites 2..N+1 are the lattice B.  The sector has
dimension N+1, modes are k = 1..N+1 and every trigonometric argument is
k*pi/(N+2).  Time is the dimensionless tau = eta * t throughout; ``eta``
only rescales energies and reported physical times.
"""
import cmath
import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import DomainError, InconsistencyError
from .specfun import j1_ratio

UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class ChainConfig:
    """Chain size ``n_sites_b`` (N) and coupling scale ``coupling`` (eta)."""

    n_sites_b: int
    coupling: float = 1.0

    def __post_init__(self):
        if int(self.n_sites_b) != self.n_sites_b or self.n_sites_b < 1:
            raise DomainError(f"n_sites_b must be a positive integer, got {self.n_sites_b!r}")
        if not self.coupling > 0 or not math.isfinite(self.coupling):
            raise DomainError(f"coupling must be positive and finite, got {self.coupling!r}")
        object.__setattr__(self, "n_sites_b", int(self.n_sites_b))

    @property
    def dim(self):
        return self.n_sites_b + 1

    @property
    def denom(self):
        return self.n_sites_b + 2


@dataclass(frozen=True)
class QubitPreparation:
    """Mixing angle ``theta`` in [0, pi/2] and marginal overlap ``alpha``, |alpha| <= 1.

    The purified initial state is cos(theta)|e>|m1> + sin(theta)|g>|m2> with
    <m1|m2> = alpha.
    """

    theta: float = math.pi / 4
    alpha: complex = 0j

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi / 2 + 1e-15:
            raise DomainError(f"theta must lie in [0, pi/2], got {self.theta!r}")
        a = complex(self.alpha)
        if abs(a) > 1.0 + 1e-12:
            raise DomainError(f"|alpha| must not exceed 1, got {abs(a)!r}")
        object.__setattr__(self, "alpha", a)

    @classmethod
    def from_polar(cls, theta, alpha_abs, alpha_phase=0.0):
        return cls(theta, cmath.rect(alpha_abs, alpha_phase))

    @classmethod
    def from_density_matrix(cls, rho):
        """Recover (theta, alpha) from a 2x2 qubit density matrix in the (e, g) basis."""
        rho = np.asarray(rho, dtype=complex)
        ree, rgg = rho[0, 0].real, rho[1, 1].real
        theta = math.atan2(math.sqrt(max(rgg, 0.0)), math.sqrt(max(ree, 0.0)))
        if ree <= 0 or rgg <= 0:
            return cls(theta, 0j)
        # rho_eg = sin cos conj(alpha)
        return cls(theta, np.conj(rho[0, 1]) / math.sqrt(ree * rgg))

    @property
    def cos2(self):
        return math.cos(self.theta) ** 2

    @property
    def sin2(self):
        return math.sin(self.theta) ** 2

    @property
    def alpha_abs2(self):
        return abs(self.alpha) ** 2

    def density_matrix(self):
        c, s = math.cos(self.theta), math.sin(self.theta)
        off = s * c * np.conj(self.alpha)
        return np.array([[c * c, off], [np.conj(off), s * s]], dtype=complex)


@dataclass(frozen=True)
class SpectralMode:
    index: int
    energy: float
    site_weights: np.ndarray = field(repr=False)


class Provenance(str, enum.Enum):
    ANALYTIC = "analytic"
    ORACLE_INTEGRATED = "oracle-integrated"
    ORACLE_DIAGONALIZED = "oracle-diagonalized"
    INFINITE_N = "infinite-n"


@dataclass
class AmplitudeSeries:
    """Amplitudes on a tau grid.

    ``cj`` has shape (samples, N) and is ``None`` for the infinite chain,
    where only the return amplitude is known in closed form.
    """

    tau: np.ndarray
    ce: np.ndarray
    cj: np.ndarray | None
    provenance: Provenance
    n_sites_b: int | None = None
    prep: QubitPreparation | None = None

    def __len__(self):
        return self.tau.shape[0]

    @property
    def ce_abs2(self):
        return np.abs(self.ce) ** 2

    @property
    def cj_norm_sq(self):
        if self.cj is None:
            return 1.0 - self.ce_abs2
        return np.sum(np.abs(self.cj) ** 2, axis=1)

    def unitarity_deviation(self):
        """Max | |c_e|^2 + sum_j |c_j|^2 - 1 | over the grid (0 for the infinite chain)."""
        if self.cj is None:
            return 0.0
        return float(np.max(np.abs(self.ce_abs2 + self.cj_norm_sq - 1.0)))

    def check_unitarity(self, tol=UNITARITY_TOL):
        dev = self.unitarity_deviation()
        if dev > tol:
            raise InconsistencyError(f"amplitudes violate unitarity by {dev:.3e} (tol {tol:.1e})")
        return dev


@lru_cache(maxsize=64)
def _tables(n):
    """Mode energies (tau units) and the amplitude weight tables for N = n."""
    k = np.arange(1, n + 2)
    theta = k * np.pi / (n + 2)
    energies = 2.0 * np.cos(theta)
    sin_k = np.sin(theta)
    w_e = (2.0 / (n + 2)) * sin_k**2
    j = np.arange(1, n + 1)
    w_j = (2.0 / (n + 2)) * sin_k[:, None] * np.sin(np.outer(k, j + 1) * np.pi / (n + 2))
    for arr in (energies, w_e, w_j):
        arr.setflags(write=False)
    return energies, w_e, np.ascontiguousarray(w_j)


def spectrum(config):
    """The N+1 modes ordered by k; energies 2 eta cos(k pi/(N+2)) strictly decrease."""
    n, m = config.n_sites_b, config.denom
    energies, _, _ = _tables(n)
    sites = np.arange(1, n + 2)
    return [
        SpectralMode(
            index=k,
            energy=config.coupling * energies[k - 1],
            site_weights=math.sqrt(2.0 / m) * np.sin(sites * k * np.pi / m),
        )
        for k in range(1, n + 2)
    ]


def _grid(tau):
    t = np.asarray(tau, dtype=np.float64)
    return t, np.ascontiguousarray(t.reshape(-1))


def amplitude_ce(config, tau):
    """Return amplitude c_e(tau) = sum_k 2/(N+2) sin^2(k pi/(N+2)) exp(-i E_k tau / eta).

    Evaluated as 1 + sum_k w_k (exp(...) - 1), which is exactly 1 at tau = 0.
    Scalar input gives a Python complex; arrays give a complex array.
    """
    t, flat = _grid(tau)
    energies, w_e, _ = _tables(config.n_sites_b)
    out = 1.0 + kernels.phase_sum(energies, np.ascontiguousarray(w_e[:, None]), flat)[:, 0]
    return complex(out[0]) if t.ndim == 0 else out.reshape(t.shape)


def amplitudes_cj(config, tau):
    """Lattice amplitudes c_j(tau), j = 1..N, with site factor sin((j+1) k pi/(N+2)).

    Shape (N,) for scalar tau, else (len(tau), N).
    """
    t, flat = _grid(tau)
    energies, _, w_j = _tables(config.n_sites_b)
    out = kernels.phase_sum(energies, w_j, flat)
    return out[0] if t.ndim == 0 else out


def _check_grid(tau_grid):
    grid = np.ascontiguousarray(np.asarray(tau_grid, dtype=np.float64).reshape(-1))
    if grid.size == 0:
        raise DomainError("tau grid is empty")
    if np.any(grid < 0) or np.any(np.diff(grid) < 0) or not np.all(np.isfinite(grid)):
        raise DomainError("tau grid must be finite, non-negative and ascending")
    return grid


def evolve(config, prep, tau_grid):
    """Analytic amplitudes on ``tau_grid``; O(N) work per sample and site."""
    grid = _check_grid(tau_grid)
    energies, w_e, w_j = _tables(config.n_sites_b)
    weights = np.ascontiguousarray(np.column_stack([w_e, w_j]))
    both = kernels.phase_sum(energies, weights, grid)
    return AmplitudeSeries(
        tau=grid,
        ce=1.0 + both[:, 0],
        cj=both[:, 1:],
        provenance=Provenance.ANALYTIC,
        n_sites_b=config.n_sites_b,
        prep=prep,
    )


def amplitude_ce_infinite(tau):
    """N -> infinity limit J1(2 tau)/tau of the return amplitude (real)."""
    return j1_ratio(tau)


def evolve_infinite(prep, tau_grid):
    grid = _check_grid(tau_grid)
    return AmplitudeSeries(
        tau=grid,
        ce=j1_ratio(grid).astype(np.complex128),
        cj=None,
        provenance=Provenance.INFINITE_N,
        n_sites_b=None,
        prep=prep,
    )


def hopping_matrix_from_modes(modes):
    """Reassemble sum_k E_k v_k v_k^T (tau units when eta = 1)."""
    v = np.array([m.site_weights for m in modes])
    e = np.array([m.energy for m in modes])
    return (v.T * e) @ v


def linearized_energy(n_sites_b, k):
    """First-order expansion of 2 cos(k pi/(N+2)) about the band centre: pi (1 - 2k/(N+2))."""
    return np.pi * (1.0 - 2.0 * np.asarray(k) / (n_sites_b + 2))


def linearization_error(n_sites_b):
    """Max |E_k/eta - pi(1 - 2k/(N+2))| over the central band N/4 <= k <= 3N/4."""
    k = np.arange(1, n_sites_b + 2)
    band = (k >= n_sites_b / 4) & (k <= 3 * n_sites_b / 4)
    exact = 2.0 * np.cos(k[band] * np.pi / (n_sites_b + 2))
    return float(np.max(np.abs(exact - linearized_energy(n_sites_b, k[band]))))


def centre_linearization_error(n_sites_b, modes=2):
    """Max linearization error over the ``modes`` modes on each side of k = (N+2)/2.

    Unlike the quarter-band measure this window shrinks in energy as N grows,
    so it decreases monotonically (as (modes pi/(N+2))^3 / 3 at large N).
    """
    k = np.arange(1, n_sites_b + 2)
    band = np.abs(k - (n_sites_b + 2) / 2) <= modes
    exact = 2.0 * np.cos(k[band] * np.pi / (n_sites_b + 2))
    return float(np.max(np.abs(exact - linearized_energy(n_sites_b, k[band]))))
