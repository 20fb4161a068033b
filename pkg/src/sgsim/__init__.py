"""sgsim: closed-form decoherence toolkit for a Gaussian-chain spin measurement.

The package computes, at finite chain half-size k and measurement time T,
the branch overlaps, state distances, transition probabilities, pointer
statistics and entropy bookkeeping of a spin-1/2 measured by a chain of
2k+1 Gaussian packets, and validates every analytic formula against an
independent grid-quadrature oracle (see :mod:`sgsim.oracle` and the
``sgsim validate`` command).
"""

from .gaussian_model import (BranchState, GaussianPacket, LogOverlap, SGConfig,
                             WindowCheck, branch_center_distance, branch_overlap,
                             check_measurement_window, decoherence_time, evolve,
                             initial_state, per_site_log_overlap, per_site_overlap)
from .pointer import (PointerReading, cm_characteristic,
                      cm_characteristic_from_centers, cm_mean, magnetization_pointer,
                      mixture_magnetization, spin_readout)
from .spin_entropy import (EntropyLedger, SpinChainMixture, binary_entropy,
                           classify_process, collapse_entropy_audit, concavity_gap,
                           mean_entropy, mixture_density, von_neumann_entropy)
from .state_metrics import (DisjointnessResult, FidelityRecord, ReducedSpinMatrix,
                            TransitionEstimate, collapse, deficit_lower_bound,
                            disjointness_test, fidelity_record,
                            local_discrepancy_bound, norm_distance,
                            reduced_spin_density, transition_probability)

__version__ = "0.1.0"

__all__ = [
    "SGConfig", "GaussianPacket", "BranchState", "LogOverlap", "WindowCheck",
    "initial_state", "evolve", "per_site_overlap", "per_site_log_overlap",
    "branch_overlap", "decoherence_time", "branch_center_distance",
    "check_measurement_window",
    "ReducedSpinMatrix", "FidelityRecord", "TransitionEstimate",
    "DisjointnessResult", "norm_distance", "fidelity_record",
    "transition_probability", "reduced_spin_density", "collapse",
    "local_discrepancy_bound", "disjointness_test", "deficit_lower_bound",
    "PointerReading", "cm_characteristic", "cm_characteristic_from_centers",
    "cm_mean", "spin_readout", "magnetization_pointer", "mixture_magnetization",
    "SpinChainMixture", "EntropyLedger", "binary_entropy", "von_neumann_entropy",
    "mixture_density", "mean_entropy", "concavity_gap", "collapse_entropy_audit",
    "classify_process",
    "__version__",
]
