
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterndd import cluster, protocols
from clusterndd.cluster import C4, C5
from clusterndd.errors import ArgumentError, ContractViolation
from clusterndd.protocols import PauliWord, apply_pauli, inject_error
from clusterndd.qstate import basis_state, fidelity_up_to_phase
from conftest import SQRT1_2, as_state, states


class TestPauli:
    def test_identity(self):
        psi = as_state(np.arange(1, 17))
        np.testing.assert_array_equal(apply_pauli(psi, "II", (1, 2)).amps, psi.amps)

    def test_x_on_first(self):
        out = apply_pauli(basis_state(4, "0000"), "X", (1,))
        np.testing.assert_array_equal(out.amps, basis_state(4, "1000").amps)

    def test_xz_matches_exactly_one_row(self):
        out = apply_pauli(cluster.table_state(C4, "0000"), "XZ", (1, 2))
        fids = [fidelity_up_to_phase(out, r.state()) for r in cluster.table_rows(C4).values()]
        assert sum(abs(f - 1) < 1e-10 for f in fids) == 1
        assert sum(f < 1e-10 for f in fids) == 15

    def test_length_mismatch(self):
        with pytest.raises(ArgumentError):
            apply_pauli(basis_state(2, "00"), "XZ", (1,))

    def test_bad_letter(self):
        with pytest.raises(ArgumentError):
            PauliWord("XQ")

    def test_message_encoding(self):
        assert PauliWord.from_message("0000").letters == "II"
        assert PauliWord.from_message("0101").letters == "XX"
        assert PauliWord.from_message("1011").letters == "YZ"
        assert all(PauliWord.from_message(m).to_message() == m
                   for m in (format(k, "04b") for k in range(16)))


@settings(max_examples=50, deadline=None)
@given(states(min_qubits=2), st.text(alphabet="IXYZ", min_size=2, max_size=2))
def test_pauli_involution(psi, word):
    twice = apply_pauli(apply_pauli(psi, word, (1, 2)), word, (1, 2))
    assert fidelity_up_to_phase(twice, psi) == pytest.approx(1, abs=1e-10)


class TestCodebook:
    def test_contiguous_holders_cannot_carry_four_bits(self):
        # Z1Z2 and Z3Z4 stabilize canonical |C4>, so II ~ ZZ on either half
        base = cluster.canonical_state(C4)
        for qubits in ((1, 2), (3, 4)):
            assert fidelity_up_to_phase(apply_pauli(base, "ZZ", qubits), base) == pytest.approx(1)
            assert len(set(protocols.encoding_labels(qubits).values())) == 8
        for holder in ("first-two-qubits", "last-two-qubits"):
            with pytest.raises(ContractViolation):
                protocols.build_codebook(holder)

    @pytest.mark.parametrize("qubits", [(1, 3), (2, 4), (1, 4), (2, 3)])
    def test_interleaved_holders_are_bijective(self, qubits):
        book = protocols.build_codebook(qubits)
        labels = [e.label for e in book.entries]
        assert len(set(labels)) == 16

    def test_identity_message(self):
        book = protocols.build_codebook((1, 3))
        e = book.encode("0000")
        assert e.word.letters == "II" and e.label == "0000"
        assert book.decode("0000") == "0000"

    def test_stable_label(self):
        a = protocols.build_codebook((1, 3)).encode("0101").label
        protocols._codebook.cache_clear()
        assert protocols.build_codebook((1, 3)).encode("0101").label == a

    def test_round_trip_all_messages(self):
        base = cluster.canonical_state(C4)
        for qubits in ((1, 3), (2, 4)):
            book = protocols.build_codebook(qubits)
            for e in book.entries:
                from clusterndd.ndd import run_ndd
                out = run_ndd(apply_pauli(base, e.word, qubits), C4, seed=1)
                assert book.decode(out.label) == e.message
                restored = apply_pauli(out.post_state, e.word, qubits)
                assert fidelity_up_to_phase(restored, base) == pytest.approx(1, abs=1e-10)

    def test_c5_out_of_scope(self):
        with pytest.raises(ArgumentError):
            protocols.build_codebook((1, 3), family=C5)


class TestDialogue:
    def test_single(self):
        t = protocols.dialogue_run(["0000"], seed=0)
        (turn,) = t.turns
        assert turn.decoded == "0000" and turn.fidelity == pytest.approx(1, abs=1e-10)

    def test_three_messages(self):
        msgs = ["1010", "0110", "1111"]
        t = protocols.dialogue_run(msgs, seed=5)
        assert [x.decoded for x in t.turns] == msgs
        assert [x.speaker for x in t.turns] == ["Alice", "Bob", "Alice"]
        assert all(abs(x.fidelity - 1) <= 1e-10 for x in t.turns)

    def test_hundred_random(self):
        rng = np.random.default_rng(2024)
        msgs = [format(int(k), "04b") for k in rng.integers(0, 16, size=100)]
        t = protocols.dialogue_run(msgs, seed=7)
        assert sum(x.decoded != x.message for x in t.turns) == 0
        assert max(abs(x.fidelity - 1) for x in t.turns) <= 1e-10

    def test_contiguous_pairing_fails_loudly(self):
        with pytest.raises(ContractViolation):
            protocols.dialogue_run(["0000"], seed=0, pairing=protocols.CONTIGUOUS_PAIRING)

    @pytest.mark.parametrize("bad", ["000", "00a0", "00000"])
    def test_malformed(self, bad):
        with pytest.raises(ArgumentError):
            protocols.dialogue_run([bad], seed=0)

    def test_transcript_serializes(self):
        import json
        doc = json.loads(json.dumps(protocols.dialogue_run(["0001"], 0).to_dict()))
        assert doc["turns"][0]["message"] == "0001"


class TestErrors:
    def test_bit_flip(self):
        out = inject_error(basis_state(4, "0000"), 1, "bit-flip")
        np.testing.assert_array_equal(out.amps, basis_state(4, "1000").amps)

    def test_phase_flip(self):
        psi = as_state(np.kron([1, 1], [0.6, 0.8j]))
        out = inject_error(psi, 1, "phase-flip")
        np.testing.assert_allclose(out.amps, np.kron([SQRT1_2, -SQRT1_2], [0.6, 0.8j]), atol=1e-15)

    def test_both_on_qubit_2_is_a_row(self):
        out = inject_error(cluster.canonical_state(C4), 2, "both")
        assert cluster.match_row(C4, out) is not None

    def test_both_is_zx(self):
        out = inject_error(basis_state(1, "0"), 1, "both")
        np.testing.assert_array_equal(out.amps, [0, -1])

    def test_bad_kind(self):
        with pytest.raises(ArgumentError):
            inject_error(basis_state(1, "0"), 1, "flip")

    def test_bad_qubit(self):
        with pytest.raises(ArgumentError):
            inject_error(basis_state(1, "0"), 2, "bit-flip")


@pytest.fixture(scope="module")
def table():
    return protocols.build_syndrome_table(C4)


class TestSyndromeTable:
    def test_thirteen_cases(self, table):
        assert len(table.cases) == 13
        assert table.cases[0] == (None, "0000")

    def test_no_error_entry(self, table):
        assert None in table.diagnose("0000")

    def test_soundness(self, table):
        for case, label in table.cases:
            assert case in table.diagnose(label)

    def test_labels_match_oracle(self, table):
        # oracle: commutation of each single-qubit Pauli with the label observables
        obs = ["ZZII", "XXIZ", "IIZZ", "ZIXX"]
        letter = {"bit-flip": "X", "phase-flip": "Z", "both": "Y"}
        for case, label in table.cases[1:]:
            q, kind = case
            p = letter[kind]
            want = "".join(str(int(o[q - 1] not in ("I", p))) for o in obs)
            assert label == want, case

    def test_counts_and_collisions(self, table):
        assert table.distinct_labels == 11
        assert table.collisions == {
            "0100": [(1, "phase-flip"), (2, "phase-flip")],
            "0001": [(3, "phase-flip"), (4, "phase-flip")],
        }
        assert any("claimed: 16" in line for line in table.report_lines())

    def test_unreachable_label(self, table):
        assert table.diagnose("1111") == []

    def test_c5(self):
        t = protocols.build_syndrome_table(C5)
        assert len(t.cases) == 16
        assert all(c in t.diagnose(lab) for c, lab in t.cases)
