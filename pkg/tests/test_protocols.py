import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from bellclone import dense, protocols
from bellclone.calculus import BellEnsemble, mix, to_dense
from bellclone.dense import DenseState, pauli
from bellclone.labels import B1, B2, B3, B4, LABELS
from bellclone.protocols import (
    LedgerStep,
    ResourceLedger,
    build_sigma_n,
    clifford_factors,
    clone_four_1_to_n,
    clone_four_dense,
    clone_pair_1_to_n,
    clone_pair_dense,
    distill_quasi_pure,
    distill_quasi_pure_dense,
    eq_filter_choi,
    ideal_channel,
    necessity_witness_four,
    necessity_witness_two,
    pair_reduction_table,
    prepare_quasi_pure,
    prepare_rho_m,
    prepare_rho_m_dense,
    smolin_ensemble,
    teleport_two_qubit,
)

ALL_PAIRS = list(itertools.combinations(LABELS, 2))


class TestCliffordFactors:
    def test_table_has_24_elements(self):
        factors = clifford_factors()
        assert len(factors) == 24
        assert factors[0][0] == "I"

    def test_all_unitary(self):
        for _, m in clifford_factors():
            assert_allclose(m @ m.conj().T, np.eye(2), atol=1e-12)


class TestPairReduction:
    def test_canonical_pair_needs_no_rotation(self):
        red = pair_reduction_table(B1, B3)
        assert (red.alice_word, red.bob_word) == ("I", "I")

    def test_phase_pair_uses_hadamards(self):
        red = pair_reduction_table(B1, B2)
        assert (red.alice_word, red.bob_word) == ("H", "H")
        assert red.label_map[B2] == B3 and red.label_map[B1] == B1

    @pytest.mark.parametrize("pair", ALL_PAIRS)
    def test_reduction_lands_on_b1_b3(self, pair):
        red = pair_reduction_table(*pair)
        assert {red.label_map[l] for l in pair} == {B1, B3}

    @pytest.mark.parametrize("pair", ALL_PAIRS)
    def test_label_map_certified_densely(self, pair):
        red = pair_reduction_table(*pair)
        full = np.kron(red.alice_matrix, red.bob_matrix)
        for src, dst in red.label_map.items():
            out = full @ dense.bell_vector(src)
            overlap = abs(np.vdot(dense.bell_vector(dst), out))
            assert overlap == pytest.approx(1.0, abs=1e-12)

    def test_identical_labels_rejected(self):
        with pytest.raises(ValueError):
            pair_reduction_table(B2, B2)


class TestClonePair:
    def test_point_inputs_clone_exactly(self):
        out, ledger = clone_pair_1_to_n(B3, (B1, B3), 2)
        assert out.entries == {(B3, B3): 1.0}
        assert ledger.ebits_consumed == 1.0
        assert ledger.classical_bits == 0

        out, ledger = clone_pair_1_to_n(B1, (B1, B3), 5)
        assert out.entries == {(B1,) * 5: 1.0}
        assert ledger.ebits_consumed == 4.0

    def test_linearity_on_mixed_input(self):
        rho_sep = mix([BellEnsemble.point((B1,)), BellEnsemble.point((B2,))], [0.5, 0.5])
        out, _ = clone_pair_1_to_n(rho_sep, (B1, B2), 2)
        assert out.entries == {(B1, B1): 0.5, (B2, B2): 0.5}

    def test_input_outside_pair_rejected(self):
        with pytest.raises(ValueError, match="outside"):
            clone_pair_1_to_n(B2, (B1, B3), 2)

    def test_single_copy_is_identity_and_free(self):
        out, ledger = clone_pair_1_to_n(B4, (B2, B4), 1)
        assert out.entries == {(B4,): 1.0}
        assert ledger.ebits_consumed == 0.0

    @pytest.mark.parametrize("pair", ALL_PAIRS)
    def test_dense_agreement_all_pairs(self, pair):
        for inp in pair:
            for n in (2, 3):
                sym, ledger = clone_pair_1_to_n(inp, pair, n)
                assert sym.entries == {(inp,) * n: 1.0}
                assert ledger.ebits_consumed == n - 1
                dn = clone_pair_dense(inp, pair, n)
                target = to_dense(sym).branches[0].amplitudes
                assert dense.fidelity(dn, target) == pytest.approx(1.0, abs=1e-12)

    def test_ledger_is_locc(self):
        _, ledger = clone_pair_1_to_n(B2, (B2, B4), 3)
        assert ledger.locc_violations() == []
        parties = {s.party for s in ledger.steps}
        assert parties <= {"alice", "bob", "classical"}


class TestPrepareRhoM:
    def test_two_pairs_is_smolin(self):
        e, ledger = prepare_rho_m(2)
        assert e == smolin_ensemble()
        assert ledger.ebits_consumed == 0.0

    @pytest.mark.parametrize("m,expected", [(3, 2.0), (4, 2.0), (5, 4.0), (6, 4.0)])
    def test_parity_cost(self, m, expected):
        e, ledger = prepare_rho_m(m)
        assert ledger.ebits_consumed == expected
        assert e.allclose(BellEnsemble.uniform_strings(m), tol=0.0)

    @pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
    def test_dense_execution_matches(self, m):
        e, _ = prepare_rho_m(m)
        td = dense.trace_distance(to_dense(e), prepare_rho_m_dense(m))
        assert td < 1e-12

    def test_structure_up_to_32(self):
        for m in range(2, 33):
            e, ledger = prepare_rho_m(m)
            assert set(e.entries.values()) == {0.25}
            assert all(len(set(s)) == 1 for s in e.entries)
            assert ledger.ebits_consumed == (m - 1 if m % 2 else m - 2)
            assert ledger.locc_violations() == []

    def test_m_below_two_rejected(self):
        with pytest.raises(ValueError):
            prepare_rho_m(1)


class TestTeleportation:
    @pytest.mark.parametrize("label", LABELS)
    def test_bell_states_pass_smolin_channel_exactly(self, label):
        channel = to_dense(smolin_ensemble())
        inp = to_dense(BellEnsemble.point((label,)), role="input")
        out = teleport_two_qubit(channel, inp)
        assert dense.fidelity(out, dense.bell_vector(label)) == pytest.approx(1.0, abs=1e-12)

    def test_ideal_channel_moves_any_state(self):
        rng = np.random.default_rng(41)
        vec = rng.normal(size=4) + 1j * rng.normal(size=4)
        vec /= np.linalg.norm(vec)
        inp = DenseState.pure(vec, dense.pair_register(1, role="input"))
        out = teleport_two_qubit(ideal_channel(), inp)
        assert dense.fidelity(out, vec) == pytest.approx(1.0, abs=1e-12)

    def test_product_input_is_filtered(self):
        # |00><00| keeps only its I(x)I and z(x)z components.
        vec = np.zeros(4, dtype=complex)
        vec[0] = 1.0
        inp = DenseState.pure(vec, dense.pair_register(1, role="input"))
        out = teleport_two_qubit(to_dense(smolin_ensemble()), inp)
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 0] = expected[3, 3] = 0.5
        assert_allclose(out.density_matrix(), expected, atol=1e-12)

    def test_alice_measurement_statistics_uniform(self):
        channel = to_dense(smolin_ensemble())
        inp = to_dense(BellEnsemble.point((B2,)), role="input")
        combined = dense.tensor(inp, channel)
        outcomes = dense.bell_measurement(combined, (0, 2))
        assert len(outcomes) == 4
        for _, prob, _ in outcomes:
            assert prob == pytest.approx(0.25, abs=1e-12)

    def test_choi_matches_term_by_term_form(self):
        channel = to_dense(smolin_ensemble())
        choi = dense.choi_matrix(lambda s: teleport_two_qubit(channel, s))
        residual = np.max(np.abs(choi - eq_filter_choi()))
        assert residual < 1e-9

    def test_filter_choi_equals_kraus_assembly(self):
        omega = np.zeros(16, dtype=complex)
        omega[[0, 5, 10, 15]] = 0.5
        reference = np.outer(omega, omega.conj())
        expected = np.zeros((16, 16), dtype=complex)
        for k in range(4):
            kraus = np.kron(np.kron(pauli(k), pauli(k)), np.eye(4))
            expected += 0.25 * (kraus @ reference @ kraus.conj().T)
        assert_allclose(eq_filter_choi(), expected, atol=1e-14)

    def test_wrong_channel_size_rejected(self):
        inp = to_dense(BellEnsemble.point((B1,)), role="input")
        with pytest.raises(ValueError, match="two-pair"):
            teleport_two_qubit(to_dense(BellEnsemble.point((B1, B1, B1))), inp)


class TestCloneFour:
    def test_single_label_inputs(self):
        out, ledger = clone_four_1_to_n(B4, 2)
        assert out.entries == {(B4, B4): 1.0}
        assert ledger.ebits_consumed == 2.0

        out, ledger = clone_four_1_to_n(B2, 3)
        assert out.entries == {(B2, B2, B2): 1.0}
        assert ledger.ebits_consumed == 2.0

    def test_uniform_input_two_copies_is_smolin(self):
        out, _ = clone_four_1_to_n((0.25, 0.25, 0.25, 0.25), 2)
        assert out == smolin_ensemble()

    @pytest.mark.parametrize("label", LABELS)
    @pytest.mark.parametrize("n", [2, 3])
    def test_dense_teleportation_route_agrees(self, label, n):
        sym, _ = clone_four_1_to_n(label, n)
        dn = clone_four_dense(label, n)
        assert dense.fidelity(dn, to_dense(sym).branches[0].amplitudes) == pytest.approx(
            1.0, abs=1e-12
        )
        assert dense.trace_distance(to_dense(sym), dn) < 1e-10

    def test_mixed_input_clones_jointly(self):
        q = (0.4, 0.1, 0.3, 0.2)
        sym, _ = clone_four_1_to_n(q, 2)
        assert sym.entries == {
            (B1, B1): 0.4,
            (B2, B2): 0.1,
            (B3, B3): 0.3,
            (B4, B4): 0.2,
        }
        dn = clone_four_dense(q, 2)
        assert dense.trace_distance(to_dense(sym), dn) < 1e-10

    def test_parity_cost_and_classical_bits(self):
        for n, expected in [(1, 0.0), (2, 2.0), (3, 2.0), (4, 4.0), (5, 4.0)]:
            _, ledger = clone_four_1_to_n(B1, n)
            assert ledger.ebits_consumed == expected
            assert ledger.classical_bits == 4
            assert ledger.locc_violations() == []

    def test_bad_distribution_rejected(self):
        with pytest.raises(ValueError, match="distribution"):
            clone_four_1_to_n((0.5, 0.5, 0.5, -0.5), 2)


class TestQuasiPure:
    def test_uniform_case_reproduces_three_pair_ancilla(self):
        e, ledger = prepare_quasi_pure((0.25, 0.25, 0.25, 0.25), 3)
        assert e.allclose(BellEnsemble.uniform_strings(3), tol=0.0)
        assert ledger.ebits_consumed == 2.0

    def test_point_mass_rejected_at_boundary(self):
        with pytest.raises(ValueError, match="1/2"):
            prepare_quasi_pure((1.0, 0.0, 0.0, 0.0), 3)

    def test_even_copies_rejected(self):
        with pytest.raises(ValueError, match="odd"):
            prepare_quasi_pure((0.25, 0.25, 0.25, 0.25), 4)

    def test_generic_vector(self):
        p = (0.4, 0.1, 0.3, 0.2)
        e, ledger = prepare_quasi_pure(p, 3)
        assert len(e.entries) == 4
        assert e.probability((B1, B1, B1)) == 0.4
        assert e.probability((B4, B4, B4)) == 0.2
        assert ledger.ebits_consumed == 2.0
        # cross-check against the dense teleportation route
        dn = clone_four_dense(p, 3)
        assert dense.trace_distance(to_dense(e), dn) < 1e-10


class TestDistillQuasiPure:
    def test_generic_vector_branches(self):
        e, _ = prepare_quasi_pure((0.4, 0.1, 0.3, 0.2), 3)
        branches, ledger = distill_quasi_pure(e)
        assert [(bit, prob) for bit, prob, _ in branches] == [(0, 0.5), (1, 0.5)]
        assert branches[0][2].entries == {(B1, B1): 1.0}
        assert branches[1][2].entries == {(B3, B3): 1.0}
        assert ledger.ebits_distilled == 2.0
        assert ledger.classical_bits == 2

    def test_point_mass_input(self):
        branches, ledger = distill_quasi_pure(BellEnsemble.point((B1, B1, B1)))
        assert branches == [(0, 1.0, branches[0][2])]
        assert branches[0][2].entries == {(B1, B1): 1.0}
        assert ledger.ebits_distilled == 2.0

    def test_uniform_three_pair_is_reversible(self):
        e, prep = prepare_quasi_pure((0.25, 0.25, 0.25, 0.25), 3)
        branches, ledger = distill_quasi_pure(e)
        assert prep.ebits_consumed == ledger.ebits_distilled == 2.0
        assert [prob for _, prob, _ in branches] == [0.5, 0.5]

    def test_dense_route_agrees(self):
        e, _ = prepare_quasi_pure((0.4, 0.1, 0.3, 0.2), 3)
        sym_branches, _ = distill_quasi_pure(e)
        dense_branches = distill_quasi_pure_dense(e)
        for (bit, prob, cond), (dbit, dprob, dstate) in zip(sym_branches, dense_branches):
            assert bit == dbit
            assert prob == pytest.approx(dprob, abs=1e-12)
            assert dense.trace_distance(to_dense(cond), dstate) < 1e-10

    def test_non_constant_strings_rejected(self):
        with pytest.raises(ValueError, match="constant"):
            distill_quasi_pure(BellEnsemble.point((B1, B2)))

    def test_locc_audit(self):
        e, _ = prepare_quasi_pure((0.3, 0.2, 0.3, 0.2), 3)
        _, ledger = distill_quasi_pure(e)
        assert ledger.locc_violations() == []


class TestSigmaBuild:
    def test_single_pair_is_identity(self):
        build = build_sigma_n(0.42, 1)
        assert build.ensemble == build.start
        assert build.steps == (("bilateral_hadamard", 0), ("bilateral_hadamard", 0))

    def test_three_pairs(self):
        build = build_sigma_n(0.3, 3)
        assert build.ensemble.entries == {(B1, B1, B1): 0.3, (B2, B2, B2): 0.7}
        assert build.intermediate.entries == {(B1, B1, B1): 0.3, (B3, B3, B3): 0.7}

    @pytest.mark.parametrize("p", [0.1, 0.3, 0.7])
    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_exact_round_trip(self, p, n):
        build = build_sigma_n(p, n)
        assert build.ensemble.entries == {(B1,) * n: p, (B2,) * n: 1.0 - p}
        back = protocols.apply_steps(build.ensemble, build.inverse_steps)
        assert back.entries == build.start.entries

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.7])
    def test_probability_domain(self, p):
        with pytest.raises(ValueError):
            build_sigma_n(p, 2)


class TestNecessityWitnesses:
    def test_two_state_budget(self):
        before, after = necessity_witness_two()
        assert before.value <= 1e-9
        assert after.value >= 1.0 - 1e-9
        assert before.provenance == after.provenance == "dense-witness"

    def test_four_state_budget(self):
        before, after = necessity_witness_four()
        assert before.value <= 1e-9
        assert after.value >= 2.0 - 1e-9


class TestLedger:
    def test_audit_flags_cross_party_step(self):
        step = LedgerStep("alice", "cnot", ("A0", "B1"))
        assert step.violates_locality()
        clean = LedgerStep("bob", "cnot", ("B0", "B1"))
        assert not clean.violates_locality()
        classical = LedgerStep("classical", "broadcast-outcomes", (4,))
        assert not classical.violates_locality()

    def test_unknown_party_rejected(self):
        ledger = ResourceLedger()
        with pytest.raises(ValueError):
            ledger.record("charlie", "cnot", "A0")

    def test_to_dict(self):
        ledger = ResourceLedger(ebits_consumed=2.0, classical_bits=4)
        assert ledger.to_dict() == {
            "ebits_consumed": 2.0,
            "ebits_distilled": 0.0,
            "classical_bits": 4,
        }
