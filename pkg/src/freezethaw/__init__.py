"""Entanglement freezing and thawing of a qubit coupled to a finite XY chain.

A qubit A, a memory qubit M and an (N+1)-site XY chain share one excitation.
The package evaluates the exact return amplitude c_e(tau) and the Schmidt
weights K_A, K_B, detects frozen plateaus of K_B, and cross-checks
everything against independent numerical oracles.
"""
from .chain import (
    AmplitudeSeries,
    ChainConfig,
    Provenance,
    QubitPreparation,
    amplitude_ce,
    amplitude_ce_infinite,
    evolve,
    evolve_infinite,
    spectrum,
)
from .entanglement import entanglement_series, k_a_closed_form, k_b_closed_form
from .errors import DomainError, InconsistencyError, NumericError, PreconditionError
from .freeze import FreezeCriteria, FreezeReport, detect_frozen_intervals, predicted_timings, revival_period_estimate
from .kernels import BACKEND

__all__ = [
    "AmplitudeSeries",
    "BACKEND",
    "ChainConfig",
    "DomainError",
    "FreezeCriteria",
    "FreezeReport",
    "InconsistencyError",
    "NumericError",
    "PreconditionError",
    "Provenance",
    "QubitPreparation",
    "amplitude_ce",
    "amplitude_ce_infinite",
    "detect_frozen_intervals",
    "entanglement_series",
    "evolve",
    "evolve_infinite",
    "k_a_closed_form",
    "k_b_closed_form",
    "predicted_timings",
    "revival_period_estimate",
    "spectrum",
]
