"""Row builders behind the CLI subcommands.

Each builder takes the merged base parameters plus the declared sweeps and
returns an :class:`ExperimentTable`; every row is computed by a pure
function of its sweep point, so tables are deterministic and safe to
evaluate on a worker pool.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Sequence

from .gaussian_model import SGConfig, branch_overlap
from .pointer import cm_characteristic, cm_mean, spin_readout
from .spin_entropy import classify_process, collapse_entropy_audit
from .state_metrics import fidelity_record
from .sweep import SweepSpec, evaluate_rows, sweep_points

__all__ = ["ExperimentTable", "build_table", "SWEEPABLE", "FIELDNAMES"]

SWEEPABLE = {
    "decoherence-curve": ("k", "T"),
    "pointer": ("rho", "k", "T"),
    "entropy": ("k", "alpha2"),
    "collapse-audit": ("k", "alpha2"),
    "scaling-study": ("k",),
}

FIELDNAMES = {
    "decoherence-curve": (
        "k", "T", "log_overlap", "norm_distance",
        "transition_prob_partial", "off_diagonal_magnitude"),
    "pointer": (
        "rho", "k", "T", "re_chi_plus", "im_chi_plus", "re_chi_minus",
        "im_chi_minus", "z_cm_mean_plus", "z_cm_mean_minus", "s_z_readout"),
    "entropy": (
        "k", "alpha2", "S_mixture", "per_site", "concavity_gap",
        "s_pre", "s_avg_outcomes", "classification"),
    "collapse-audit": (
        "k", "alpha2", "s_pre", "s_post_mixture", "s_avg_outcomes",
        "per_site_pre", "per_site_post_mixture", "per_site_avg_outcomes",
        "classification"),
    "scaling-study": (
        "k", "T", "log_overlap", "norm_distance",
        "transition_prob_partial", "off_diagonal_magnitude"),
}


@dataclass(frozen=True)
class ExperimentTable:
    experiment: str
    fieldnames: tuple[str, ...]
    rows: list[dict]


def _config(base: dict, k: int, T: float) -> SGConfig:
    return SGConfig.from_alpha2(base["lambda"], base["sigma0"], T, k, base["alpha2"])


def _overlap_row(config: SGConfig, T: float) -> dict:
    overlap = branch_overlap(config, T)
    record = fidelity_record(overlap)
    off_diag = abs(config.alpha) * abs(config.beta) * overlap.magnitude
    return {
        "k": config.k,
        "T": T,
        "log_overlap": overlap.log_magnitude,
        "norm_distance": record.norm_distance,
        "transition_prob_partial": record.fidelity,
        "off_diagonal_magnitude": off_diag,
    }


def _decoherence_row(base: dict, point: dict) -> dict:
    k = int(point.get("k", base["k"]))
    T = float(point.get("T", base["T"]))
    return _overlap_row(_config(base, k, T), T)


def _scaling_row(base: dict, point: dict) -> dict:
    # T(k) = c / sqrt(2k+1); the configured T plays the role of the constant c.
    k = int(point.get("k", base["k"]))
    T = float(base["T"]) / sqrt(2 * k + 1)
    return _overlap_row(_config(base, k, T), T)


def _pointer_row(base: dict, point: dict) -> dict:
    k = int(point.get("k", base["k"]))
    T = float(point.get("T", base["T"]))
    rho = float(point.get("rho", base["rho"]))
    config = _config(base, k, T)
    chi_plus = cm_characteristic(config, rho, +1, T)
    chi_minus = cm_characteristic(config, rho, -1, T)
    z_plus = cm_mean(config, +1).z_cm_mean
    z_minus = cm_mean(config, -1).z_cm_mean
    return {
        "rho": rho,
        "k": k,
        "T": T,
        "re_chi_plus": chi_plus.real,
        "im_chi_plus": chi_plus.imag,
        "re_chi_minus": chi_minus.real,
        "im_chi_minus": chi_minus.imag,
        "z_cm_mean_plus": z_plus,
        "z_cm_mean_minus": z_minus,
        "s_z_readout": spin_readout(z_plus, config.lam, T),
    }


def _entropy_row(base: dict, point: dict) -> dict:
    k = int(point.get("k", base["k"]))
    alpha2 = float(point.get("alpha2", base["alpha2"]))
    ledger = collapse_entropy_audit(alpha2, k)
    # The two branch chains are pure, so the mixing gap equals the mixture entropy.
    return {
        "k": k,
        "alpha2": alpha2,
        "S_mixture": ledger.s_post_mixture,
        "per_site": ledger.per_site_post_mixture,
        "concavity_gap": ledger.s_post_mixture,
        "s_pre": ledger.s_pre,
        "s_avg_outcomes": ledger.s_avg_outcomes,
        "classification": classify_process(ledger.s_pre, ledger.s_avg_outcomes),
    }


def _audit_row(base: dict, point: dict) -> dict:
    k = int(point.get("k", base["k"]))
    alpha2 = float(point.get("alpha2", base["alpha2"]))
    ledger = collapse_entropy_audit(alpha2, k)
    return {
        "k": k,
        "alpha2": alpha2,
        "s_pre": ledger.s_pre,
        "s_post_mixture": ledger.s_post_mixture,
        "s_avg_outcomes": ledger.s_avg_outcomes,
        "per_site_pre": ledger.per_site_pre,
        "per_site_post_mixture": ledger.per_site_post_mixture,
        "per_site_avg_outcomes": ledger.per_site_avg_outcomes,
        "classification": classify_process(ledger.s_pre, ledger.s_avg_outcomes),
    }


_ROW_BUILDERS = {
    "decoherence-curve": _decoherence_row,
    "pointer": _pointer_row,
    "entropy": _entropy_row,
    "collapse-audit": _audit_row,
    "scaling-study": _scaling_row,
}


def build_table(experiment: str, base: dict, sweeps: Sequence[SweepSpec],
                max_workers: int | None = None) -> ExperimentTable:
    row_fn = _ROW_BUILDERS[experiment]
    points = sweep_points(sweeps)
    rows = evaluate_rows(lambda point: row_fn(base, point), points, max_workers)
    return ExperimentTable(experiment, FIELDNAMES[experiment], rows)
