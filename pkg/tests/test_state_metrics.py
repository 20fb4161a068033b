import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sgsim.gaussian_model import (GaussianPacket, LogOverlap, SGConfig, branch_overlap,
                                  decoherence_time, per_site_overlap)
from sgsim.oracle import (Grid, PhaseObservable, discretize, inner_product,
                          tensor_observable_check)
from sgsim.spin_entropy import von_neumann_entropy
from sgsim.state_metrics import (FidelityRecord, ReducedSpinMatrix, collapse,
                                 deficit_lower_bound, disjointness_test,
                                 fidelity_record, local_discrepancy_bound,
                                 norm_distance, reduced_spin_density,
                                 transition_probability)

HALF = math.sqrt(0.5)


def balanced_config(T=1.0, k=1):
    return SGConfig(1.0, 1.0, T, k, HALF, HALF)


def rank2_trace_norm(fidelity):
    """Independent oracle: trace norm of x(x,.) - y(y,.) for explicit vectors."""
    g = math.sqrt(fidelity)
    x = np.array([1.0, 0.0])
    y = np.array([g, math.sqrt(1.0 - fidelity)])
    difference = np.outer(x, x) - np.outer(y, y)
    return float(np.abs(np.linalg.eigvalsh(difference)).sum())


class TestNormDistance:
    def test_disjoint_saturation_at_two(self):
        assert norm_distance(LogOverlap(-math.inf)) == 2.0
        assert abs(norm_distance(LogOverlap(-1e8)) - 2.0) < 1e-15

    def test_identical_states_at_zero(self):
        assert norm_distance(LogOverlap(0.0)) == 0.0

    def test_value_at_fidelity_e_inverse(self):
        # frozen from rank2_trace_norm(exp(-1)) = 1.5901201952413002
        d = norm_distance(LogOverlap(-0.5))
        assert_allclose(d, 1.5901201952413002, rtol=1e-15)
        assert_allclose(d, rank2_trace_norm(math.exp(-1.0)), atol=1e-12)

    @pytest.mark.parametrize("fidelity", [0.9, 0.5, 0.25, 0.05, 1e-6])
    def test_matches_rank2_diagonalization(self, fidelity):
        d = norm_distance(LogOverlap(0.5 * math.log(fidelity)))
        assert abs(d - rank2_trace_norm(fidelity)) < 1e-12

    def test_monotone_decreasing_in_fidelity(self):
        log_mags = [0.0, -0.1, -0.5, -2.0, -10.0, -100.0]
        distances = [norm_distance(LogOverlap(lm)) for lm in log_mags]
        assert all(a < b for a, b in zip(distances, distances[1:]))
        assert all(0.0 <= d <= 2.0 for d in distances)


class TestFidelityRecord:
    def test_duality_across_scales(self):
        for log_mag in (0.0, -1e-10, -0.3, -1.0, -20.0, -300.0, -5e7):
            rec = fidelity_record(LogOverlap(log_mag))
            assert abs(rec.fidelity + rec.norm_distance ** 2 / 4.0 - 1.0) <= 1e-12

    def test_inconsistent_record_rejected(self):
        with pytest.raises(ValueError):
            FidelityRecord(log_fidelity=-1.0, norm_distance=0.1)


class TestTransitionProbability:
    def test_separated_branches_give_zero(self):
        t_d = 3.0
        records = [fidelity_record(branch_overlap(balanced_config(T=t_d, k=k), t_d))
                   for k in range(1, 65)]
        estimate = transition_probability(records)
        assert estimate.converged
        assert abs(estimate.value) < 1e-10

    def test_constant_unit_fidelity_gives_one(self):
        records = [fidelity_record(LogOverlap(0.0))] * 5
        estimate = transition_probability(records)
        assert estimate.converged
        assert estimate.value == 1.0

    def test_shrinking_time_gives_positive_limit(self):
        # T(k) = c/sqrt(2k+1) leaves F at exp(-lam^2 c^2 / sigma0^2) > 0
        c = 1.0
        records = []
        for k in range(1, 40):
            cfg = balanced_config(T=c / math.sqrt(2 * k + 1), k=k)
            records.append(fidelity_record(branch_overlap(cfg, cfg.T)))
        estimate = transition_probability(records)
        assert estimate.converged
        assert_allclose(estimate.value, math.exp(-1.0), rtol=1e-12)

    def test_empty_sequence_rejected(self):
        with pytest.raises(ValueError):
            transition_probability([])

    def test_oscillating_sequence_flagged(self):
        records = [fidelity_record(LogOverlap(lm)) for lm in (-0.1, -0.9, -0.1, -0.9)]
        estimate = transition_probability(records)
        assert not estimate.converged


class TestReducedSpinDensity:
    def test_initial_state_is_pure(self):
        rho = reduced_spin_density(balanced_config(), 0.0)
        eigenvalues = rho.eigenvalues()
        assert_allclose(sorted(eigenvalues), [0.0, 1.0], atol=1e-12)

    def test_off_diagonal_value(self):
        # frozen: |alpha*beta| * exp(-3/2) = 0.11156508007421491
        rho = reduced_spin_density(balanced_config(), 1.0)
        assert_allclose(rho.off_diagonal_magnitude, 0.11156508007421491, rtol=1e-12)

    def test_off_diagonal_against_tensor_oracle(self):
        cfg = balanced_config()
        grid = Grid(-14.0, 14.0, 1024)
        f = discretize(GaussianPacket(+1.0, 1.0), grid)
        g = discretize(GaussianPacket(-1.0, 1.0), grid)
        cross = inner_product(g, f) ** 3  # three independent site integrals
        measured = abs(cfg.alpha * np.conj(cfg.beta) * cross)
        analytic = reduced_spin_density(cfg, 1.0).off_diagonal_magnitude
        assert abs(measured - analytic) / analytic < 1e-6

    def test_large_apparatus_diagonalizes(self):
        cfg = SGConfig(1.0, 1.0, 3.0, 40, 0.6, 0.8)
        rho = reduced_spin_density(cfg, cfg.T)
        assert rho.off_diagonal_magnitude < 1e-150
        assert_allclose(np.diag(rho.matrix).real, [0.36, 0.64])
        # past ~83 sites of separation the linear value underflows outright
        huge = reduced_spin_density(SGConfig(1.0, 1.0, 3.0, 100, 0.6, 0.8), 3.0)
        assert huge.off_diagonal_magnitude == 0.0

    def test_off_diagonal_monotone_in_t_and_k(self):
        in_t = [reduced_spin_density(balanced_config(), t).off_diagonal_magnitude
                for t in (0.0, 0.5, 1.0, 2.0)]
        assert all(a > b for a, b in zip(in_t, in_t[1:]))
        in_k = [reduced_spin_density(balanced_config(k=k), 1.0).off_diagonal_magnitude
                for k in (0, 1, 2, 5)]
        assert all(a > b for a, b in zip(in_k, in_k[1:]))

    def test_eigenvalues_stay_in_unit_interval(self):
        for t in (0.0, 0.3, 1.0, 4.0):
            eigenvalues = reduced_spin_density(balanced_config(), t).eigenvalues()
            assert eigenvalues.min() >= -1e-12 and eigenvalues.max() <= 1.0 + 1e-12

    def test_invalid_matrix_rejected(self):
        with pytest.raises(ValueError):
            ReducedSpinMatrix(np.array([[0.5, 0.9], [0.9, 0.5]]))  # not PSD


class TestCollapse:
    def test_diagonal_input_unchanged(self):
        rho = ReducedSpinMatrix(np.diag([0.3, 0.7]).astype(complex))
        assert np.array_equal(collapse(rho).matrix, rho.matrix)

    def test_balanced_collapse_gains_ln2(self):
        rho = reduced_spin_density(balanced_config(), 0.0)
        hat = collapse(rho)
        assert_allclose(von_neumann_entropy(rho.matrix), 0.0, atol=1e-12)
        assert_allclose(von_neumann_entropy(hat.matrix), math.log(2.0), rtol=1e-12)

    def test_idempotent(self):
        rho = reduced_spin_density(balanced_config(), 0.7)
        once = collapse(rho)
        assert np.array_equal(collapse(once).matrix, once.matrix)

    def test_never_decreases_entropy(self):
        for t in (0.0, 0.2, 0.8, 2.0):
            rho = reduced_spin_density(SGConfig(1.0, 1.0, 1.0, 1, 0.6, 0.8), t)
            assert von_neumann_entropy(collapse(rho).matrix) >= \
                von_neumann_entropy(rho.matrix) - 1e-12


class TestLocalDiscrepancyBound:
    def test_full_support_keeps_prefactor(self):
        cfg = balanced_config()
        assert_allclose(local_discrepancy_bound(cfg, cfg.n_sites, 1.0), 1.0)

    def test_single_site_value(self):
        # two untouched sites contribute g^2 = e^(-1) = 0.36787944117144233
        cfg = balanced_config()
        assert_allclose(local_discrepancy_bound(cfg, 1, 1.0),
                        0.36787944117144233, rtol=1e-12)

    def test_fixed_support_vanishes_with_k(self):
        t_d = 3.0
        values = [local_discrepancy_bound(balanced_config(T=t_d, k=k), 2, 1.0)
                  for k in (1, 5, 20, 100)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert values[-1] == 0.0  # underflows honestly at 199 untouched sites

    def test_support_exceeding_apparatus_rejected(self):
        with pytest.raises(ValueError):
            local_discrepancy_bound(balanced_config(), 4, 1.0)

    def test_negative_norm_rejected(self):
        with pytest.raises(ValueError):
            local_discrepancy_bound(balanced_config(), 1, -1.0)

    def test_randomized_observables_stay_below_bound(self):
        cfg = balanced_config()
        rng = np.random.default_rng(42)
        for _ in range(100):
            site = int(rng.integers(0, 3))
            theta = float(rng.uniform(-3.0, 3.0))
            h = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            h = h + h.conj().T
            h /= np.linalg.norm(h, 2)
            obs = PhaseObservable(h, tuple(theta if i == site else None
                                           for i in range(3)))
            measured = tensor_observable_check(cfg, obs)  # raises on violation
            assert measured <= local_discrepancy_bound(cfg, 1, 1.0) + 1e-12


class TestDisjointnessTest:
    def test_constant_overlap_below_one_is_disjoint(self):
        result = disjointness_test([math.exp(-0.5)] * 10)
        assert result.disjoint
        assert result.verdict == "disjoint"
        assert_allclose(result.partial_sum, 10 * (1 - math.exp(-0.5)), rtol=1e-12)

    def test_all_ones_equivalent(self):
        result = disjointness_test([1.0, 1.0, 1.0])
        assert not result.disjoint
        assert result.partial_sum == 0.0

    def test_inverse_square_tail_equivalent(self):
        overlaps = [1.0 - 1.0 / i ** 2 for i in range(2, 60)]
        result = disjointness_test(overlaps, tail="power")
        assert not result.disjoint
        assert result.tail_exponent == pytest.approx(2.0, abs=0.1)

    def test_inverse_linear_tail_disjoint(self):
        overlaps = [1.0 - 1.0 / i for i in range(2, 60)]
        result = disjointness_test(overlaps, tail="power")
        assert result.disjoint

    def test_out_of_range_overlap_rejected(self):
        with pytest.raises(ValueError):
            disjointness_test([0.0])
        with pytest.raises(ValueError):
            disjointness_test([1.1])
        with pytest.raises(ValueError):
            disjointness_test([])

    def test_unknown_tail_model_rejected(self):
        with pytest.raises(ValueError):
            disjointness_test([0.5], tail="geometric")

    def test_reports_quadratic_bound_with_config(self):
        cfg = balanced_config()
        result = disjointness_test([per_site_overlap(cfg, decoherence_time(cfg))] * 4,
                                   config=cfg)
        assert result.per_term_bound == pytest.approx(9.0 / 8.0)


class TestDeficitLowerBound:
    def test_constant_nine_eighths(self):
        # lam * t_D = 3 sigma0 makes the bound 9/8 for every configuration
        for cfg in (balanced_config(), SGConfig(2.5, 0.3, 1.0, 4, 1.0, 0.0)):
            assert_allclose(deficit_lower_bound(cfg), 1.125, rtol=1e-15)

    def test_quadratic_form_valid_in_small_exponent_regime(self):
        # 1 - exp(-x) >= x/4 holds for x <= 3.92; check a few x = (lam*t/sigma0)^2/2
        cfg = balanced_config()
        for t in (0.2, 0.5, 1.0, 2.0):
            exponent = 0.5 * t * t
            deficit = 1.0 - per_site_overlap(cfg, t)
            assert deficit >= exponent / 4.0

    def test_quadratic_form_overshoots_at_decoherence_time(self):
        # at t_D the exponent is 4.5 and the quadratic bound exceeds the deficit
        cfg = balanced_config()
        true_deficit = 1.0 - per_site_overlap(cfg, decoherence_time(cfg))
        assert deficit_lower_bound(cfg) > true_deficit
