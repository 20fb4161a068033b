import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sgsim.spin_entropy import (SpinChainMixture, binary_entropy, classify_process,
                                collapse_entropy_audit, concavity_gap, mean_entropy,
                                mixture_density, von_neumann_entropy)
from sgsim.state_metrics import ReducedSpinMatrix, collapse

LN2 = math.log(2.0)


def random_density(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def matrix_log_quadrature(rho, nodes=96):
    """Independent entropy oracle: -tr(rho ln rho) via the integral form.

    ln(A) = integral_0^1 (A - I) [t (A - I) + I]^(-1) dt, evaluated with
    Gauss-Legendre nodes; valid for full-rank density matrices.
    """
    dim = rho.shape[0]
    eye = np.eye(dim)
    x, w = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * (x + 1.0)
    weights = 0.5 * w
    shifted = rho - eye
    log_rho = np.zeros_like(rho)
    for ti, wi in zip(t, weights):
        log_rho += wi * (shifted @ np.linalg.inv(ti * shifted + eye))
    return float(-np.trace(rho @ log_rho).real)


class TestVonNeumannEntropy:
    def test_pure_projector_is_zero(self):
        psi = np.array([0.6, 0.8j])
        rho = np.outer(psi, psi.conj())
        assert von_neumann_entropy(rho) <= 1e-14

    def test_maximally_mixed_qubit(self):
        assert_allclose(von_neumann_entropy(np.eye(2) / 2.0), LN2, rtol=1e-12)

    def test_quarter_three_quarters(self):
        # frozen: 0.25 ln 4 + 0.75 ln(4/3) = 0.5623351446188083
        rho = np.diag([0.25, 0.75]).astype(complex)
        assert_allclose(von_neumann_entropy(rho), 0.5623351446188083, rtol=1e-12)

    def test_matrix_log_quadrature_oracle(self):
        rng = np.random.default_rng(3)
        rhos = [np.diag([0.25, 0.75]).astype(complex)] + \
            [random_density(rng, 4) for _ in range(5)]
        for rho in rhos:
            assert abs(von_neumann_entropy(rho) - matrix_log_quadrature(rho)) < 1e-9

    def test_bounds_on_random_states(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            dim = int(rng.integers(2, 17))
            s = von_neumann_entropy(random_density(rng, dim))
            assert 0.0 <= s <= math.log(dim) + 1e-12

    @pytest.mark.parametrize("bad", [
        np.array([[0.5, 0.3], [0.0, 0.5]]),        # not Hermitian
        np.diag([0.6, 0.6]),                        # trace 1.2
        np.diag([1.2, -0.2]),                       # negative eigenvalue
    ])
    def test_invalid_density_matrices_rejected(self, bad):
        with pytest.raises(ValueError):
            von_neumann_entropy(bad.astype(complex))


class TestMixtureDensity:
    def test_pure_limit(self):
        rho = mixture_density(1.0, 2)
        assert von_neumann_entropy(rho) == 0.0

    def test_balanced_k1(self):
        rho = mixture_density(0.5, 1)
        assert rho.shape == (8, 8)
        assert_allclose(von_neumann_entropy(rho), LN2, rtol=1e-12)
        mixture = SpinChainMixture(0.5, 1)
        assert_allclose(mixture.per_site_entropy(), LN2 / 3.0, rtol=1e-12)

    def test_entropy_independent_of_k(self):
        values = [SpinChainMixture(0.3, k).entropy() for k in (0, 1, 10, 10 ** 5)]
        assert max(values) - min(values) == 0.0
        assert_allclose(values[0], binary_entropy(0.3), rtol=1e-15)

    @pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
    def test_rank2_matches_dense_eigensolve(self, k):
        for alpha2 in (0.0, 0.2, 0.5, 1.0):
            dense = von_neumann_entropy(mixture_density(alpha2, k))
            assert abs(dense - SpinChainMixture(alpha2, k).entropy()) < 1e-10

    def test_rank2_matches_dense_at_cap(self):
        # k = 5 is the dense cap: one 2048-dimensional eigensolve
        dense = von_neumann_entropy(mixture_density(0.3, 5))
        assert abs(dense - SpinChainMixture(0.3, 5).entropy()) < 1e-10

    def test_dense_form_capped(self):
        with pytest.raises(ValueError, match="capped"):
            mixture_density(0.5, 6)

    def test_spectrum_is_the_weight_pair(self):
        assert_allclose(sorted(SpinChainMixture(0.25, 7).spectrum()), [0.25, 0.75])


class TestMeanEntropy:
    def test_chain_of_101_sites(self):
        # frozen: ln 2 / 101 = 0.0068628433718806465
        assert_allclose(mean_entropy(LN2, 101), 0.0068628433718806465, rtol=1e-12)

    def test_zero_entropy(self):
        assert mean_entropy(0.0, 12) == 0.0

    def test_single_site_saturates_ln2(self):
        assert mean_entropy(LN2, 1) == LN2

    def test_bad_volume_rejected(self):
        with pytest.raises(ValueError):
            mean_entropy(0.1, 0)

    def test_above_ln2_per_site_rejected(self):
        with pytest.raises(ValueError):
            mean_entropy(2.0, 1)


class TestConcavityGap:
    def test_identical_states_have_zero_gap(self):
        rho = np.diag([0.4, 0.6]).astype(complex)
        assert abs(concavity_gap(rho, rho, 0.3)) <= 1e-12

    def test_orthogonal_pure_states_gain_ln2(self):
        up = np.diag([1.0, 0.0]).astype(complex)
        down = np.diag([0.0, 1.0]).astype(complex)
        assert_allclose(concavity_gap(up, down, 0.5), LN2, rtol=1e-12)

    def test_nonnegative_on_random_pairs(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            dim = int(rng.integers(2, 17))
            a = float(rng.uniform(0.1, 0.9))
            gap = concavity_gap(random_density(rng, dim), random_density(rng, dim), a)
            assert gap >= -1e-10

    def test_strictly_positive_for_distinct_states(self):
        rho1 = np.diag([0.9, 0.1]).astype(complex)
        rho2 = np.diag([0.2, 0.8]).astype(complex)
        assert concavity_gap(rho1, rho2, 0.5) > 1e-3

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError, match="mismatch"):
            concavity_gap(np.eye(2) / 2.0, np.eye(4) / 4.0, 0.5)

    def test_per_site_gap_vanishes_affinely(self):
        # the chain mixture gains exactly H(a); per site that is H(a)/(2k+1)
        a = 0.35
        gaps = []
        for k in (0, 1, 10, 100, 10 ** 4):
            mixture = SpinChainMixture(a, k)
            per_site_gap = mixture.entropy() / mixture.n_sites
            assert abs(per_site_gap - binary_entropy(a) / (2 * k + 1)) <= 1e-12
            gaps.append(per_site_gap)
        assert all(x > y for x, y in zip(gaps, gaps[1:]))
        assert gaps[-1] < 5e-5


class TestCollapseEntropyAudit:
    def test_balanced_single_triplet(self):
        ledger = collapse_entropy_audit(0.5, 1)
        assert ledger.s_pre == 0.0
        assert ledger.s_avg_outcomes == 0.0
        assert_allclose(ledger.s_post_mixture, LN2, rtol=1e-12)
        assert_allclose(ledger.per_site_post_mixture, LN2 / 3.0, rtol=1e-12)
        assert ledger.per_site_pre == 0.0 and ledger.per_site_avg_outcomes == 0.0
        # reading the outcome lowers the entropy from the mixture value;
        # only the per-site (mean) ledger conserves it
        assert ledger.s_avg_outcomes <= ledger.s_post_mixture

    def test_unmixed_weights_are_all_zero(self):
        ledger = collapse_entropy_audit(1.0, 3)
        assert (ledger.s_pre, ledger.s_post_mixture, ledger.s_avg_outcomes) == \
            (0.0, 0.0, 0.0)

    def test_macroscopic_chain_per_site_entropy(self):
        # frozen: H(1/2) / (2e6 + 1) = 3.4657341699326415e-07
        ledger = collapse_entropy_audit(0.5, 10 ** 6)
        assert_allclose(ledger.per_site_post_mixture, 3.4657341699326415e-07,
                        rtol=1e-12)

    def test_pre_measurement_purity_against_dense_state(self):
        # the joint pre-measurement vector on spin + 3-site chain is pure
        alpha2 = 0.3
        alpha, beta = math.sqrt(alpha2), math.sqrt(1.0 - alpha2)
        up = np.array([1.0, 0.0])
        down = np.array([0.0, 1.0])
        chain_up = np.kron(np.kron(up, up), up)
        chain_down = np.kron(np.kron(down, down), down)
        psi = alpha * np.kron(up, chain_up) + beta * np.kron(down, chain_down)
        rho = np.outer(psi, psi.conj())
        assert von_neumann_entropy(rho) <= 1e-12
        # and the dense collapsed mixture carries exactly H(alpha2)
        collapsed = alpha2 * np.outer(np.kron(up, chain_up), np.kron(up, chain_up)) \
            + (1 - alpha2) * np.outer(np.kron(down, chain_down), np.kron(down, chain_down))
        assert_allclose(von_neumann_entropy(collapsed), binary_entropy(alpha2),
                        rtol=1e-10)

    def test_matches_collapsed_spin_matrix_entropy(self):
        # once the branch overlap is gone, the 2x2 collapsed matrix holds H(a)
        ledger = collapse_entropy_audit(0.36, 2)
        rho = ReducedSpinMatrix(np.diag([0.36, 0.64]).astype(complex))
        assert_allclose(von_neumann_entropy(collapse(rho).matrix),
                        ledger.s_post_mixture, rtol=1e-12)


class TestClassifyProcess:
    def test_measurement_is_reversible(self):
        ledger = collapse_entropy_audit(0.5, 4)
        assert classify_process(ledger.s_pre, ledger.s_avg_outcomes) == "Reversible"

    def test_entropy_increase_is_irreversible(self):
        assert classify_process(0.0, 0.3, 1e-12) == "Irreversible"

    def test_entropy_decrease_is_forbidden(self):
        assert classify_process(0.3, 0.0, 1e-12) == "Forbidden"

    def test_negative_entropy_rejected(self):
        with pytest.raises(ValueError):
            classify_process(-0.1, 0.0, 1e-12)
