"""Amplitude operators, compound-state classes, and entangled mutual entropies."""

import math

import numpy as np
import pytest

from mutent import (
    AmplitudeOperator,
    BasisNotOrthonormal,
    DensityOperator,
    DimensionMismatch,
    EntangledCompoundState,
    EntangledSearch,
    InvalidAmplitude,
    MarginalMismatch,
    OptimizerConfig,
    QEntropySearch,
    QuantumChannel,
    StateFamily,
    chaos_degree,
    channel_entangled_capacity,
    channel_entangled_mutual,
    classify,
    compound_state,
    d_compound,
    disentanglement_degree,
    entangled_mutual_entropy,
    marginals,
    observable_action,
    q_compound,
    q_conditional,
    q_entropy,
    state_action,
    von_neumann_entropy,
)

from helpers import channel_pool, ginibre


def bell_projector() -> np.ndarray:
    vec = np.zeros(4)
    vec[0] = vec[3] = 1.0 / math.sqrt(2.0)
    return np.outer(vec, vec)


class TestAmplitudeOperator:
    def test_normalization_enforced(self):
        with pytest.raises(InvalidAmplitude):
            AmplitudeOperator(np.eye(2))

    def test_standard_amplitude_has_equal_marginals(self):
        sigma = ginibre(3, 1)
        rho_in, rho_out = marginals(AmplitudeOperator.standard(sigma))
        assert np.max(np.abs(rho_in.matrix - sigma.matrix)) < 1e-10
        assert np.max(np.abs(rho_out.matrix - sigma.matrix)) < 1e-10

    def test_noise_block_marginals_match_a_plain_loop(self):
        rng = np.random.default_rng(2)
        f, k, g = 2, 2, 3
        raw = rng.standard_normal((f * k, g)) + 1j * rng.standard_normal((f * k, g))
        raw /= math.sqrt(np.real(np.trace(raw.conj().T @ raw)))
        kappa = AmplitudeOperator(raw, noise_dim=f)
        want_in = raw.conj().T @ raw
        want_out = np.zeros((k, k), dtype=complex)
        for fi in range(f):
            for i in range(k):
                for j in range(k):
                    for gi in range(g):
                        want_out[i, j] += raw[fi * k + i, gi] * np.conj(
                            raw[fi * k + j, gi]
                        )
        rho_in, rho_out = marginals(kappa)
        assert np.max(np.abs(rho_in.matrix - want_in)) < 1e-10
        assert np.max(np.abs(rho_out.matrix - want_out)) < 1e-10

    def test_reshaped_pure_vector_round_trips(self):
        rng = np.random.default_rng(3)
        psi = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        psi /= np.linalg.norm(psi)
        kappa = AmplitudeOperator.from_pure_bipartite(psi, 2, 3)
        theta = q_compound(kappa, basis=np.eye(2)).theta.matrix
        assert np.max(np.abs(theta - np.outer(psi, psi.conj()))) < 1e-9

    def test_bad_reshape_length_rejected(self):
        with pytest.raises(DimensionMismatch):
            AmplitudeOperator.from_pure_bipartite(np.ones(5) / math.sqrt(5), 2, 3)

    @pytest.mark.parametrize("seed", range(6))
    def test_dual_pairing(self, seed):
        """Heisenberg and Schroedinger actions agree under the trace pairing."""
        rng = np.random.default_rng(10 + seed)
        f, k, g = (1, 3, 2) if seed % 2 else (2, 2, 2)
        raw = rng.standard_normal((f * k, g)) + 1j * rng.standard_normal((f * k, g))
        raw /= math.sqrt(np.real(np.trace(raw.conj().T @ raw)))
        kappa = AmplitudeOperator(raw, noise_dim=f)
        a = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        b = rng.standard_normal((g, g)) + 1j * rng.standard_normal((g, g))
        lhs = np.trace(b @ observable_action(kappa, a))
        rhs = np.trace(a @ state_action(kappa, b))
        assert abs(lhs - rhs) < 1e-9


class TestQCompound:
    def test_mixed_qubit_standard_amplitude_gives_the_bell_state(self):
        comp = q_compound(AmplitudeOperator.standard(DensityOperator.maximally_mixed(2)))
        theta = comp.theta.matrix
        assert np.max(np.abs(theta - bell_projector())) < 1e-10
        assert np.max(np.abs(theta @ theta - theta)) < 1e-9

    def test_rank_one_amplitude_factorizes(self):
        rng = np.random.default_rng(20)
        c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        c /= np.linalg.norm(c)
        xi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        xi /= np.linalg.norm(xi)
        kappa = AmplitudeOperator(np.outer(xi, c.conj()))
        theta = q_compound(kappa).theta.matrix
        want = np.kron(np.outer(c, c.conj()), np.outer(xi, xi.conj()))
        assert np.max(np.abs(theta - want)) < 1e-10

    @pytest.mark.parametrize("seed", range(6))
    def test_marginals_match_the_amplitude(self, seed):
        rng = np.random.default_rng(30 + seed)
        raw = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        raw /= math.sqrt(np.real(np.trace(raw.conj().T @ raw)))
        kappa = AmplitudeOperator(raw)
        comp = q_compound(kappa)
        assert comp.weakly_orthogonal
        rho_in, rho_out = marginals(kappa)
        assert np.max(np.abs(comp.input_marginal() - rho_in.matrix)) < 1e-9
        assert np.max(np.abs(comp.output_marginal() - rho_out.matrix)) < 1e-9

    def test_non_orthonormal_basis_rejected(self):
        kappa = AmplitudeOperator.standard(DensityOperator.maximally_mixed(2))
        with pytest.raises(BasisNotOrthonormal):
            q_compound(kappa, basis=np.ones((2, 2)))


class TestDCompound:
    def test_identity_channel_diagonal_blocks(self):
        rho = DensityOperator.diagonal([0.7, 0.3])
        comp = d_compound(rho, QuantumChannel.identity(2))
        want = np.zeros((4, 4))
        want[0, 0] = 0.7
        want[3, 3] = 0.3
        assert np.max(np.abs(comp.theta.matrix - want)) < 1e-10

    def test_matches_the_channel_module_compound(self):
        rho = ginibre(2, 40)
        chan = QuantumChannel.depolarizing(2, 0.5)
        a = d_compound(rho, chan).theta.matrix
        b = compound_state(rho, chan).theta.matrix
        assert np.max(np.abs(a - b)) < 1e-12

    @pytest.mark.parametrize("seed", range(6))
    def test_off_diagonal_blocks_vanish(self, seed):
        rho = ginibre(3, 50 + seed)
        chan = channel_pool(3, seed)[seed % 6]
        comp = d_compound(rho, chan)
        blocks = comp.blocks()
        for n in range(3):
            for m in range(3):
                if n != m:
                    assert np.max(np.abs(blocks[n, m])) < 1e-9


class TestClassify:
    def test_entangled_state_stays_q(self):
        comp = q_compound(AmplitudeOperator.standard(DensityOperator.maximally_mixed(2)))
        assert classify(comp) == "q"

    def test_noncommuting_blocks_classify_as_d(self):
        plus = np.array([[0.5, 0.5], [0.5, 0.5]])
        zero = np.array([[1.0, 0.0], [0.0, 0.0]])
        theta = np.zeros((4, 4))
        theta[:2, :2] = 0.5 * plus
        theta[2:, 2:] = 0.5 * zero
        state = EntangledCompoundState(
            theta=DensityOperator(theta),
            cls="d",
            basis=np.eye(2, dtype=complex),
            input_dim=2,
            output_dim=2,
        )
        assert classify(state) == "d"

    def test_commuting_blocks_classify_as_c(self):
        theta = np.diag([0.5 * 0.3, 0.5 * 0.7, 0.5 * 0.9, 0.5 * 0.1])
        state = EntangledCompoundState(
            theta=DensityOperator(theta),
            cls="d",
            basis=np.eye(2, dtype=complex),
            input_dim=2,
            output_dim=2,
        )
        assert classify(state) == "c"

    def test_constant_channel_compound_is_classical(self):
        comp = d_compound(ginibre(3, 60), QuantumChannel.constant(ginibre(2, 61), 3))
        assert classify(comp) == "c"


class TestEntangledMutualEntropy:
    def test_product_state_carries_nothing(self):
        rho = ginibre(2, 70)
        sigma = ginibre(2, 71)
        comp = d_compound(rho, QuantumChannel.constant(sigma))
        got = entangled_mutual_entropy(comp, rho, sigma)
        assert got.value == pytest.approx(0.0, abs=1e-10)

    def test_bell_state_two_bits(self):
        mm = DensityOperator.maximally_mixed(2)
        comp = q_compound(AmplitudeOperator.standard(mm))
        got = entangled_mutual_entropy(comp, mm, mm, base="2")
        assert got.value == pytest.approx(2.0, abs=1e-9)

    def test_identity_channel_block_compound_gives_input_entropy(self):
        rho = ginibre(3, 72)
        comp = d_compound(rho, QuantumChannel.identity(3))
        got = entangled_mutual_entropy(comp, rho, rho)
        assert got.value == pytest.approx(von_neumann_entropy(rho).value, abs=1e-9)

    def test_marginal_mismatch_detected(self):
        rho = ginibre(2, 73)
        comp = d_compound(rho, QuantumChannel.identity(2))
        with pytest.raises(MarginalMismatch):
            entangled_mutual_entropy(comp, ginibre(2, 74), rho)


class TestQEntropy:
    def test_pure_state_exactly_zero(self):
        rep = q_entropy(DensityOperator.pure([1.0, 1.0]), QEntropySearch(n_samples=2))
        assert rep.status == "exact"
        assert rep.entropy.value == 0.0

    def test_mixed_qubit_reaches_two_bits(self):
        rep = q_entropy(
            DensityOperator.maximally_mixed(2), QEntropySearch(n_samples=4), base="2"
        )
        assert rep.status == "lower_bound"
        assert rep.entropy.value == pytest.approx(2.0, abs=1e-9)

    @pytest.mark.parametrize("seed", range(5))
    def test_doubles_the_von_neumann_entropy(self, seed):
        sigma = ginibre(2 + seed % 2, 80 + seed)
        rep = q_entropy(sigma, QEntropySearch(n_samples=6, seed=seed))
        s = von_neumann_entropy(sigma).value
        assert rep.entropy.value == pytest.approx(2.0 * s, abs=1e-9)
        assert rep.entropy.value <= 2.0 * s + 1e-9
        assert rep.argmax["kind"] in ("standard", "dilated")

    def test_conditional_entropy_of_the_bell_state_is_zero(self):
        mm = DensityOperator.maximally_mixed(2)
        comp = q_compound(AmplitudeOperator.standard(mm))
        got = q_conditional(comp, mm, mm, QEntropySearch(n_samples=4))
        assert got.value == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("seed", range(4))
    def test_conditional_entropy_nonnegative(self, seed):
        rho = ginibre(2, 90 + seed)
        chan = channel_pool(2, seed)[seed % 6]
        comp = d_compound(rho, chan)
        sigma = DensityOperator(comp.output_marginal())
        got = q_conditional(comp, rho, sigma, QEntropySearch(n_samples=4))
        assert got.value >= -1e-9


class TestDisentanglementDegree:
    def test_bell_state_hits_minus_one_bit(self):
        mm = DensityOperator.maximally_mixed(2)
        comp = q_compound(AmplitudeOperator.standard(mm))
        got = disentanglement_degree(comp, mm, base="2")
        assert got.value == pytest.approx(-1.0, abs=1e-9)

    def test_product_state_keeps_full_entropy(self):
        rho = ginibre(2, 100)
        sigma = ginibre(2, 101)
        comp = d_compound(rho, QuantumChannel.constant(sigma))
        got = disentanglement_degree(comp, sigma)
        assert got.value == pytest.approx(von_neumann_entropy(sigma).value, abs=1e-9)

    @pytest.mark.parametrize("seed", range(5))
    def test_bounded_by_the_marginal_entropy(self, seed):
        rho = ginibre(2, 110 + seed)
        chan = channel_pool(2, seed)[seed % 6]
        comp = d_compound(rho, chan)
        sigma = DensityOperator(comp.output_marginal())
        got = disentanglement_degree(comp, sigma).value
        s = von_neumann_entropy(sigma).value
        assert -s - 1e-9 <= got <= s + 1e-9

    def test_wrong_marginal_rejected(self):
        rho = ginibre(2, 120)
        comp = d_compound(rho, QuantumChannel.identity(2))
        with pytest.raises(MarginalMismatch):
            disentanglement_degree(comp, ginibre(2, 121))

    def test_chaos_degree_is_minus_the_entropy(self):
        sigma = ginibre(2, 122)
        got = chaos_degree(sigma, QEntropySearch(n_samples=4))
        assert got.value == pytest.approx(-von_neumann_entropy(sigma).value, abs=1e-9)


class TestChannelEntangledMutual:
    def test_identity_channel_block_class_returns_entropy(self):
        rho = ginibre(3, 130)
        rep = channel_entangled_mutual(rho, QuantumChannel.identity(3), "d")
        assert rep.status == "exact"
        assert rep.value == pytest.approx(von_neumann_entropy(rho).value, abs=1e-8)

    def test_identity_channel_q_class_doubles_the_entropy(self):
        rho = ginibre(3, 131)
        rep = channel_entangled_mutual(
            rho, QuantumChannel.identity(3), "q", EntangledSearch(n_samples=4)
        )
        assert rep.value == pytest.approx(
            2.0 * von_neumann_entropy(rho).value, abs=1e-6
        )

    def test_identity_channel_c_class_commutes(self):
        rho = ginibre(2, 132)
        rep = channel_entangled_mutual(rho, QuantumChannel.identity(2), "c")
        assert rep.value == pytest.approx(von_neumann_entropy(rho).value, abs=1e-8)

    def test_erasing_channel_flattens_every_class(self):
        rho = ginibre(2, 133)
        chan = QuantumChannel.depolarizing(2, 1.0)
        for cls in ("q", "d", "c"):
            rep = channel_entangled_mutual(rho, chan, cls, EntangledSearch(n_samples=4))
            assert rep.value == pytest.approx(0.0, abs=1e-9)

    def test_commutation_starved_search_falls_back_to_zero(self):
        # a nondegenerate state whose rank-one outputs pairwise fail to
        # commute leaves only the uncorrelated compound in the classical class
        rng = np.random.default_rng(9)
        g = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
        q, _ = np.linalg.qr(g)
        chan = QuantumChannel.from_isometry(q, noise_dim=2)
        rho = DensityOperator.diagonal([0.5, 0.3, 0.2])
        rep = channel_entangled_mutual(rho, chan, "c")
        assert rep.value == 0.0
        assert rep.status == "lower_bound"

    @pytest.mark.parametrize("seed", range(8))
    def test_class_ordering(self, seed):
        dim = 2 + seed % 2
        rho = ginibre(dim, 140 + seed)
        chan = channel_pool(dim, seed)[seed % 6]
        search = EntangledSearch(n_samples=4, seed=seed)
        i_q = channel_entangled_mutual(rho, chan, "q", search).value
        i_d = channel_entangled_mutual(rho, chan, "d", search).value
        i_c = channel_entangled_mutual(rho, chan, "c", search).value
        assert i_q >= i_d - 1e-9
        assert i_d >= i_c - 1e-9

    def test_unknown_class_rejected(self):
        with pytest.raises(ValueError):
            channel_entangled_mutual(ginibre(2, 150), QuantumChannel.identity(2), "x")


class TestChannelEntangledCapacity:
    def test_identity_capacities_respect_the_log_bounds(self):
        fam = StateFamily.explicit(
            [ginibre(2, 160 + i) for i in range(3)] + [DensityOperator.maximally_mixed(2)]
        )
        search = EntangledSearch(n_samples=4)
        cfg = OptimizerConfig(n_starts=4, n_steps=10)
        cap_d = channel_entangled_capacity(
            QuantumChannel.identity(2), "d", fam, search, cfg
        )
        cap_q = channel_entangled_capacity(
            QuantumChannel.identity(2), "q", fam, search, cfg
        )
        assert cap_d.value.nats <= math.log(2.0) + 1e-9
        assert cap_q.value.nats <= 2.0 * math.log(2.0) + 1e-9
        assert cap_q.value.nats >= cap_d.value.nats - 1e-9
        assert cap_d.value.nats == pytest.approx(math.log(2.0), abs=1e-9)
        assert cap_q.value.nats == pytest.approx(2.0 * math.log(2.0), abs=1e-6)
