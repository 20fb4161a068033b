"""Oracle-versus-analytic comparison suite behind ``sgsim validate``.

Every closed-form quantity in the package is checked here against the
brute-force grid oracle (or against an elementary independent computation
such as diagonalizing an explicit rank-2 operator).  Each check reports
its worst measured error and its tolerance; any failure is a build
failure.

``perturb_sigma0`` skews the packet width used on the *analytic* side
only.  It exists to demonstrate sensitivity: with a 1 percent skew the
suite must fail, proving the comparisons are not vacuous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracle, pointer, spin_entropy, state_metrics
from .gaussian_model import (GaussianPacket, LogOverlap, SGConfig, branch_overlap,
                             check_measurement_window, decoherence_time, evolve,
                             per_site_log_overlap)

__all__ = ["CheckResult", "run_validation", "report"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tol: float
    detail: str = ""


def _skew(config: SGConfig, perturb: float) -> SGConfig:
    """Analytic-side config with sigma0 scaled by (1 + perturb)."""
    if perturb == 0.0:
        return config
    return SGConfig(config.lam, config.sigma0 * (1.0 + perturb), config.T,
                    config.k, config.alpha, config.beta)


def _overlap_quadrature(lam: float, sigma0: float, t: float) -> float:
    """Quadrature overlap of the two one-site packets at +-lam*t."""
    grid = oracle.standard_grid(SGConfig(lam, sigma0, t, 0, 1.0, 0.0), t)
    f = oracle.discretize(GaussianPacket(+lam * t, sigma0), grid)
    g = oracle.discretize(GaussianPacket(-lam * t, sigma0), grid)
    return abs(oracle.inner_product(f, g))


def check_per_site_overlap(perturb: float) -> CheckResult:
    triples = [(1.0, 1.0, 1.0), (2.0, 1.0, 0.75), (1.0, 0.5, 0.8),
               (3.0, 2.0, 1.2), (0.7, 1.3, 2.0), (1.0, 1.0, 0.0)]
    tol = 1e-6
    worst = 0.0
    for lam, sigma0, t in triples:
        config = _skew(SGConfig(lam, sigma0, max(t, 1.0), 0, 1.0, 0.0), perturb)
        analytic = math.exp(per_site_log_overlap(config, t))
        measured = _overlap_quadrature(lam, sigma0, t)
        worst = max(worst, abs(measured - analytic) / analytic)
    return CheckResult("per_site_overlap_vs_quadrature", worst <= tol, worst, tol,
                       f"{len(triples)} (lam, sigma0, t) triples")


def check_branch_factorization(perturb: float) -> CheckResult:
    config = SGConfig(1.0, 1.0, 1.0, 1, math.sqrt(0.5), math.sqrt(0.5))
    xs, ys = oracle.branch_wavefunctions(config, config.T)
    log_quadrature = math.fsum(
        math.log(abs(oracle.inner_product(fx, fy))) for fx, fy in zip(xs, ys))
    analytic = branch_overlap(_skew(config, perturb), config.T).log_magnitude
    err = abs(log_quadrature - analytic)
    return CheckResult("branch_overlap_factorization", err <= 1e-6, err, 1e-6,
                       "k=1 product of 3 site integrals, log domain")


def check_evolve_translation() -> CheckResult:
    config = SGConfig(2.0, 1.0, 3.0, 1, 1.0, 0.0)
    grid = oracle.standard_grid(config, config.T)
    shift = grid.snap(config.lam * config.T)
    at_rest = oracle.discretize(GaussianPacket(0.0, config.sigma0), grid)
    translated = oracle.translate(at_rest, shift)
    plus, minus = evolve(config, config.T)
    worst = 0.0
    for branch, sign in ((plus, +1), (minus, -1)):
        for packet in branch.packets:
            target = oracle.discretize(GaussianPacket(sign * shift, packet.sigma), grid)
            source = translated if sign > 0 else oracle.translate(at_rest, -shift)
            worst = max(worst, abs(1.0 - abs(oracle.inner_product(source, target))))
        worst = max(worst, abs(branch.packets[0].center - sign * config.lam * config.T))
    return CheckResult("evolve_matches_translation", worst <= 1e-9, worst, 1e-9,
                       "rigid shift by lam*t on every site, both branches")


def check_norm_distance_rank2() -> CheckResult:
    tol = 1e-12
    worst = 0.0
    for fidelity in (1.0, 0.9, 0.5, math.exp(-1.0), 0.1, 1e-8):
        g = math.sqrt(fidelity)
        x = np.array([1.0, 0.0])
        y = np.array([g, math.sqrt(1.0 - fidelity)])
        difference = np.outer(x, x) - np.outer(y, y)
        trace_norm = float(np.abs(np.linalg.eigvalsh(difference)).sum())
        analytic = state_metrics.norm_distance(LogOverlap(0.5 * math.log(fidelity)
                                                          if fidelity > 0 else -math.inf))
        worst = max(worst, abs(trace_norm - analytic))
    return CheckResult("norm_distance_vs_rank2_spectrum", worst <= tol, worst, tol,
                       "trace norm of x(x,.) - y(y,.) for explicit unit vectors")


def check_fidelity_duality() -> CheckResult:
    tol = 1e-12
    worst = 0.0
    for log_mag in (0.0, -1e-8, -0.25, -1.0, -5.0, -40.0, -400.0, -5e7):
        record = state_metrics.fidelity_record(LogOverlap(log_mag))
        worst = max(worst, abs(record.fidelity + record.norm_distance ** 2 / 4.0 - 1.0))
    return CheckResult("fidelity_distance_duality", worst <= tol, worst, tol,
                       "F + d^2/4 = 1 across 8 decades of log-overlap")


def check_reduced_density_cross_term(perturb: float) -> CheckResult:
    config = SGConfig(1.0, 1.0, 1.0, 1, math.sqrt(0.5), math.sqrt(0.5))
    xs, ys = oracle.branch_wavefunctions(config, config.T)
    cross = 1.0 + 0.0j
    for fx, fy in zip(xs, ys):
        cross *= oracle.inner_product(fy, fx)
    measured = abs(config.alpha * np.conj(config.beta) * cross)
    analytic = state_metrics.reduced_spin_density(
        _skew(config, perturb), config.T).off_diagonal_magnitude
    err = abs(measured - analytic) / analytic
    return CheckResult("reduced_density_cross_term", err <= 1e-6, err, 1e-6,
                       "k=1 off-diagonal vs 3-site quadrature product")


def check_collapse_trace() -> CheckResult:
    config = SGConfig(1.0, 1.0, 1.0, 1, math.sqrt(0.5), math.sqrt(0.5))
    identity = oracle.PhaseObservable(np.eye(2), (None, None, None))
    discrepancy = oracle.tensor_observable_check(config, identity)
    rho = state_metrics.reduced_spin_density(config, config.T)
    hat = state_metrics.collapse(rho)
    twice = state_metrics.collapse(hat)
    worst = max(discrepancy,
                float(np.abs(hat.matrix - twice.matrix).max()),
                abs(float(np.trace(hat.matrix).real) - 1.0),
                float(np.abs(np.diag(hat.matrix) - np.diag(rho.matrix)).max()))
    return CheckResult("collapse_preserves_traces", worst <= 1e-12, worst, 1e-12,
                       "identity observable, idempotence, diagonal preservation")


def check_locality_bound_random() -> CheckResult:
    config = SGConfig(1.0, 1.0, 1.0, 1, math.sqrt(0.5), math.sqrt(0.5))
    rng = np.random.default_rng(20240811)
    worst_margin = -math.inf
    n_trials = 100
    for _ in range(n_trials):
        site = int(rng.integers(0, config.n_sites))
        theta = float(rng.uniform(-3.0, 3.0))
        hermitian = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        hermitian = hermitian + hermitian.conj().T
        hermitian /= np.linalg.norm(hermitian, 2)
        phases = tuple(theta if i == site else None for i in range(config.n_sites))
        observable = oracle.PhaseObservable(hermitian, phases)
        measured = oracle.tensor_observable_check(config, observable)
        bound = state_metrics.local_discrepancy_bound(
            config, observable.support, observable.op_norm)
        worst_margin = max(worst_margin, measured - bound)
    passed = worst_margin <= oracle.BOUND_SLACK
    return CheckResult("locality_bound_random_observables", passed,
                       max(worst_margin, 0.0), oracle.BOUND_SLACK,
                       f"{n_trials} random single-site phase observables, k=1")


def check_cm_characteristic(perturb: float) -> CheckResult:
    config = SGConfig(1.0, 1.0, 2.0, 1, math.sqrt(0.5), math.sqrt(0.5))
    xs, ys = oracle.branch_wavefunctions(config, config.T)
    tol = 1e-6
    worst = 0.0
    for rho in (0.3, 1.0, 2.5):
        for sign, sites in ((+1, xs), (-1, ys)):
            measured = oracle.phase_expectation(sites, rho)
            analytic = pointer.cm_characteristic(_skew(config, perturb), rho, sign, config.T)
            worst = max(worst, abs(measured - analytic) / abs(analytic))
    return CheckResult("cm_characteristic_vs_quadrature", worst <= tol, worst, tol,
                       "3-site product expectation of exp(i rho z_cm)")


def check_cm_mean_derivative() -> CheckResult:
    worst = 0.0
    tol_scale = 0.0
    for T in (3.0, 10.0, 300.0):
        config = SGConfig(1.0, 1.0, T, 10, 1.0, 0.0)
        step = 1e-6
        derivative = oracle.finite_difference(
            lambda r: pointer.cm_characteristic(config, r, +1, T), 0.0, step)
        mean = (-1j * derivative).real
        expected = pointer.cm_mean(config, +1).z_cm_mean
        tol = 1e-6 * (1.0 + abs(config.lam * T))
        worst = max(worst, abs(mean - expected) / tol)
        tol_scale = max(tol_scale, tol)
    return CheckResult("cm_mean_vs_finite_difference", worst <= 1.0, worst, 1.0,
                       "derivative of the characteristic function at rho=0, "
                       "error in units of 1e-6*(1+lam*T)")


def check_readout_invariance() -> CheckResult:
    worst = 0.0
    for k in (1, 10, 1000):
        for T in np.linspace(3.0, 300.0, 50):
            config = SGConfig(1.0, 1.0, float(T), k, 1.0, 0.0)
            up = pointer.spin_readout(pointer.cm_mean(config, +1).z_cm_mean,
                                      config.lam, config.T)
            down = pointer.spin_readout(pointer.cm_mean(config, -1).z_cm_mean,
                                        config.lam, config.T)
            worst = max(worst, abs(up - 0.5), abs(down + 0.5))
    return CheckResult("spin_readout_invariance", worst <= 1e-9, worst, 1e-9,
                       "s_z constant at +-1/2 over T in [t_D, 100 t_D], k in {1,10,1000}")


def check_magnetization() -> CheckResult:
    worst = 0.0
    for k in (0, 1, 5, 1000):
        worst = max(worst, abs(pointer.magnetization_pointer(+1, k) - 1.0),
                    abs(pointer.magnetization_pointer(-1, k) + 1.0))
        for alpha2 in (0.0, 0.25, 0.5, 1.0):
            expected = 2.0 * alpha2 - 1.0
            worst = max(worst, abs(pointer.mixture_magnetization(alpha2, k) - expected))
    return CheckResult("magnetization_pointer_values", worst <= 1e-15, worst, 1e-15,
                       "aligned chains read +-1 exactly; mixtures are linear")


def check_entropy_dense_vs_rank2() -> CheckResult:
    tol = 1e-10
    worst = 0.0
    for k in (0, 1, 2):
        for alpha2 in (0.0, 0.1, 0.5, 0.75, 1.0):
            dense = spin_entropy.von_neumann_entropy(spin_entropy.mixture_density(alpha2, k))
            compact = spin_entropy.SpinChainMixture(alpha2, k).entropy()
            worst = max(worst, abs(dense - compact))
    return CheckResult("entropy_dense_vs_rank2", worst <= tol, worst, tol,
                       "full 2^(2k+1) eigensolve against the two-point spectrum")


def check_concavity_random() -> CheckResult:
    rng = np.random.default_rng(7)
    min_gap = math.inf
    for _ in range(200):
        dim = int(rng.integers(2, 17))
        rho1 = _random_density(rng, dim)
        rho2 = _random_density(rng, dim)
        a = float(rng.uniform(0.1, 0.9))
        min_gap = min(min_gap, spin_entropy.concavity_gap(rho1, rho2, a))
    err = max(0.0, -min_gap)
    return CheckResult("entropy_concavity_random", err <= 1e-10, err, 1e-10,
                       f"minimum mixing gain over 200 random pairs was {min_gap:.3e}")


def _random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def check_scaling_invariance() -> CheckResult:
    constant = 1.0
    ks = sorted({int(v) for v in np.logspace(0, 4, 60)} | {1, 2, 3, 10000})
    values = []
    for k in ks:
        T = constant / math.sqrt(2 * k + 1)
        config = SGConfig(1.0, 1.0, T, k, 1.0, 0.0)
        values.append(branch_overlap(config, T).log_magnitude)
    spread = max(values) - min(values)
    return CheckResult("scaling_study_k_independence", spread <= 1e-12, spread, 1e-12,
                       f"log-overlap under T = c/sqrt(2k+1) across k = 1..10^4 "
                       f"({len(ks)} values)")


def check_characteristic_limit() -> CheckResult:
    tol = 1e-12
    worst = -math.inf
    for k in (0, 1, 10, 100, 10000):
        config = SGConfig(1.0, 1.0, 6.0, k, 1.0, 0.0)
        for rho in np.linspace(-4.0, 4.0, 33):
            chi = pointer.cm_characteristic(config, float(rho), +1, config.T)
            limit = pointer.cm_characteristic(config, float(rho), +1, config.T,
                                              infinite_k=True)
            allowance = (rho * config.sigma0) ** 2 / (2.0 * config.n_sites)
            worst = max(worst, abs(chi - limit) - allowance)
    return CheckResult("characteristic_function_limit_rate", worst <= tol,
                       max(worst, 0.0), tol,
                       "|chi_k - phase limit| within the 1/(2k+1) Gaussian allowance")


def check_quadrature_convergence() -> CheckResult:
    exact = math.sin(3.0)
    errors = []
    for n in (64, 128, 256):
        z = np.linspace(0.0, 3.0, n)
        errors.append(abs(oracle.trapezoid(np.cos(z), z[1] - z[0]).real - exact))
    ratios = [errors[i] / errors[i + 1] for i in range(len(errors) - 1)]
    passed = all(r >= 4.0 for r in ratios)
    return CheckResult("quadrature_second_order_convergence", passed,
                       min(ratios), 4.0,
                       f"error reduction per point doubling: {[f'{r:.2f}' for r in ratios]}")


def check_measurement_window_cases() -> CheckResult:
    base = SGConfig(1.0, 1.0, 6.0, 4, 1.0, 0.0)
    t_d = decoherence_time(base)
    cases = [
        (SGConfig(1.0, 1.0, 2.0 * t_d, 4, 1.0, 0.0), True),
        (SGConfig(1.0, 1.0, t_d, 4, 1.0, 0.0), True),
        (SGConfig(1.0, 1.0, 0.0, 4, 1.0, 0.0), False),
        (SGConfig(1.0, 1.0, 0.5 * t_d, 4, 1.0, 0.0), False),
        (SGConfig(1.0, 1.0, math.inf, 4, 1.0, 0.0), False),
    ]
    failures = sum(1 for config, expected in cases
                   if check_measurement_window(config).ok is not expected)
    return CheckResult("measurement_window_cases", failures == 0, float(failures), 0.0,
                       "window accepts [t_D, inf) and names each violation")


def run_validation(perturb_sigma0: float = 0.0) -> list[CheckResult]:
    """Run every comparison; a nonzero ``perturb_sigma0`` must break the suite."""
    checks = [
        lambda: check_per_site_overlap(perturb_sigma0),
        check_evolve_translation,
        lambda: check_branch_factorization(perturb_sigma0),
        check_norm_distance_rank2,
        check_fidelity_duality,
        lambda: check_reduced_density_cross_term(perturb_sigma0),
        check_collapse_trace,
        check_locality_bound_random,
        lambda: check_cm_characteristic(perturb_sigma0),
        check_cm_mean_derivative,
        check_readout_invariance,
        check_magnetization,
        check_entropy_dense_vs_rank2,
        check_concavity_random,
        check_scaling_invariance,
        check_characteristic_limit,
        check_quadrature_convergence,
        check_measurement_window_cases,
    ]
    results = []
    for check in checks:
        try:
            results.append(check())
        except Exception as exc:  # a raised oracle mismatch is a failed check
            name = getattr(check, "__name__", "validation_check")
            results.append(CheckResult(name, False, math.inf, 0.0, f"raised: {exc}"))
    return results


def report(results: list[CheckResult]) -> str:
    """One line per check plus a summary; suitable for stdout or a file."""
    lines = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        lines.append(f"{status} {res.name}: max_error={res.max_error:.3e} "
                     f"tol={res.tol:.3e} ({res.detail})")
    failed = sum(1 for res in results if not res.passed)
    lines.append(f"{len(results)} checks, {failed} failed")
    return "\n".join(lines) + "\n"
