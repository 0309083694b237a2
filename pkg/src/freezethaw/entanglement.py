"""Schmidt-weight entanglement of the qubit A and of the lattice B."""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .chain import AmplitudeSeries, QubitPreparation
from .errors import DomainError, InconsistencyError

CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class ReducedState2x2:
    """Hermitian 2x2 state [[a, b], [conj(b), d]]."""

    a: float
    b: complex
    d: float

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [np.conj(self.b), self.d]], dtype=complex)

    @property
    def trace(self):
        return self.a + self.d

    def eigenvalues(self):
        """Closed-form eigenvalues, descending, with float noise below zero clamped."""
        mean = 0.5 * (self.a + self.d)
        radius = math.hypot(0.5 * (self.a - self.d), abs(self.b))
        lo, hi = mean - radius, mean + radius
        if lo < 0 and lo >= -CLAMP_TOL:
            lo = 0.0
        return np.array([hi, lo])


def schmidt_weight(eigenvalues):
    """K = 1 / sum(lambda^2) for a normalized spectrum."""
    lam = np.asarray(eigenvalues, dtype=np.float64)
    if np.any(lam < -CLAMP_TOL):
        raise DomainError(f"negative eigenvalue {lam.min():.3e} in Schmidt weight")
    lam = np.clip(lam, 0.0, None)
    if abs(lam.sum() - 1.0) > 1e-9:
        raise DomainError(f"eigenvalues sum to {lam.sum()!r}, expected 1")
    return float(1.0 / np.sum(lam * lam))


def reduced_rho_a(prep, ce, cj_norm_sq):
    """Reduced state of the qubit after tracing out B and M."""
    ce = complex(ce)
    if abs(ce) ** 2 + cj_norm_sq > 1.0 + 1e-9:
        raise InconsistencyError("|c_e|^2 + sum |c_j|^2 exceeds 1")
    c, s = math.cos(prep.theta), math.sin(prep.theta)
    return ReducedState2x2(
        a=c * c * abs(ce) ** 2,
        b=s * c * ce * np.conj(prep.alpha),
        d=s * s + c * c * cj_norm_sq,
    )


def effective_rho_b(prep, ce, cj):
    """State of B on its two-dimensional support {|0>, sum_j c_j|1_j> / norm}.

    B is entangled with AM through |0>(cos c_e |m1 e> + sin |m2 g>) + |Phi> cos |m1 g>,
    so rho_B never leaves that span.
    """
    cj = np.asarray(cj, dtype=complex)
    norm2 = float(np.sum(np.abs(cj) ** 2))
    c, s = math.cos(prep.theta), math.sin(prep.theta)
    if norm2 == 0.0:
        return ReducedState2x2(a=1.0, b=0j, d=0.0)
    return ReducedState2x2(
        a=c * c * abs(complex(ce)) ** 2 + s * s,
        b=c * s * prep.alpha * math.sqrt(norm2),
        d=c * c * norm2,
    )


def full_rho_b(prep, ce, cj):
    """rho_B in the basis |0>, |1_1>, ..., |1_N> (for rank checks)."""
    cj = np.asarray(cj, dtype=complex)
    c, s = math.cos(prep.theta), math.sin(prep.theta)
    # rho_B = sum over AM partner vectors: |0> -> u, |Phi> -> v
    uu = c * c * abs(complex(ce)) ** 2 + s * s
    vv = c * c
    vu = c * s * prep.alpha
    n = cj.shape[0]
    rho = np.zeros((n + 1, n + 1), dtype=complex)
    rho[0, 0] = uu
    rho[1:, 1:] = vv * np.outer(cj, np.conj(cj))
    rho[0, 1:] = vu * np.conj(cj)
    rho[1:, 0] = np.conj(rho[0, 1:])
    return rho


def _f(prep, ce):
    return 2.0 * prep.cos2 * np.abs(ce) ** 2


def _weight(x, prep):
    return 2.0 / (1.0 + (1.0 - x) ** 2 + 2.0 * prep.sin2 * x * prep.alpha_abs2)


def k_a_closed_form(prep, ce):
    """K_A = 2 / (1 + (1 - f)^2 + 2 sin^2(theta) f |alpha|^2), f = 2 cos^2(theta) |c_e|^2."""
    out = _weight(_f(prep, ce), prep)
    return float(out) if np.ndim(out) == 0 else out


def k_b_closed_form(prep, ce):
    """K_B: same form as K_A with g = 2 cos^2(theta) (1 - |c_e|^2)."""
    g = 2.0 * prep.cos2 * (1.0 - np.abs(ce) ** 2)
    out = _weight(g, prep)
    return float(out) if np.ndim(out) == 0 else out


class EntanglementSample(NamedTuple):
    tau: float
    f: float
    g: float
    k_a: float
    k_b: float


@dataclass
class EntanglementSeries:
    tau: np.ndarray
    f: np.ndarray
    g: np.ndarray
    k_a: np.ndarray
    k_b: np.ndarray
    n_sites_b: int | None = None

    def __len__(self):
        return self.tau.shape[0]

    def __getitem__(self, i):
        return EntanglementSample(
            float(self.tau[i]), float(self.f[i]), float(self.g[i]), float(self.k_a[i]), float(self.k_b[i])
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def measure(self, which):
        key = which.upper()
        if key == "K_A":
            return self.k_a
        if key == "K_B":
            return self.k_b
        raise DomainError(f"unknown entanglement measure {which!r}; expected K_A or K_B")


def entanglement_series(prep: QubitPreparation, amps: AmplitudeSeries) -> EntanglementSeries:
    """f, g, K_A and K_B at every sample of ``amps``."""
    amps.check_unitarity()
    ce = amps.ce
    f = _f(prep, ce)
    g = 2.0 * prep.cos2 * (1.0 - np.abs(ce) ** 2)
    return EntanglementSeries(
        tau=amps.tau,
        f=f,
        g=g,
        k_a=_weight(f, prep),
        k_b=_weight(g, prep),
        n_sites_b=amps.n_sites_b,
    )


def closed_form_agreement(rng, trials=1000, max_sites=8):
    """Largest |K_closed - K_eig| for K_A and K_B over random valid states.

    Each trial draws theta, alpha in the unit disk, and amplitudes with
    |c_e|^2 + sum |c_j|^2 = 1 on up to ``max_sites`` lattice sites.
    """
    dev_a = dev_b = 0.0
    for _ in range(trials):
        theta = rng.uniform(0.0, math.pi / 2)
        alpha = math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
        prep = QubitPreparation(theta, complex(alpha))
        n = int(rng.integers(1, max_sites + 1))
        z = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        z /= np.linalg.norm(z)
        ce, cj = z[0], z[1:]
        k_a = schmidt_weight(reduced_rho_a(prep, ce, float(np.sum(np.abs(cj) ** 2))).eigenvalues())
        k_b = schmidt_weight(effective_rho_b(prep, ce, cj).eigenvalues())
        dev_a = max(dev_a, abs(k_a - k_a_closed_form(prep, ce)))
        dev_b = max(dev_b, abs(k_b - k_b_closed_form(prep, ce)))
    return dev_a, dev_b
