"""Dense-coding dialogue and single-qubit error diagnosis on top of NDD.

Messages are 4-bit strings ``ij`` where each Pauli index is written in two
bits: I=00, X=01, Y=10, Z=11. The first index acts on the holder's first
qubit, the second on their second qubit.

Two-qubit dense coding on canonical |C4> only works across a cut with
Schmidt rank 4. The contiguous halves {1,2}|{3,4} have rank 2: ``Z1 Z2``
and ``Z3 Z4`` stabilize the state, so each half's 16 Paulis reach only 8
distinct states. :func:`build_codebook` raises :class:`ContractViolation` for
such holders. :data:`DEFAULT_PAIRING` therefore uses the interleaved cut
{1,3}|{2,4}, where all 16 encodings are distinguishable.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .cluster import C4, canonical_state, get_family
from .errors import ArgumentError, ContractViolation, ProtocolError
from .gates import NAMED, GateApplication
from .ndd import branch_ndd, run_ndd
from .qstate import StateVector, apply_gate, fidelity_up_to_phase

PAULI_BITS = {"I": "00", "X": "01", "Y": "10", "Z": "11"}
BITS_PAULI = {v: k for k, v in PAULI_BITS.items()}

HOLDERS = {"first-two-qubits": (1, 2), "last-two-qubits": (3, 4)}
DEFAULT_PAIRING = {"Alice": (1, 3), "Bob": (2, 4)}
CONTIGUOUS_PAIRING = {"Alice": HOLDERS["first-two-qubits"], "Bob": HOLDERS["last-two-qubits"]}


@dataclass(frozen=True)
class PauliWord:
    letters: str

    def __post_init__(self):
        letters = self.letters.upper()
        if not letters or set(letters) - set("IXYZ"):
            raise ArgumentError(f"Pauli word must use I, X, Y, Z only, got {self.letters!r}")
        object.__setattr__(self, "letters", letters)

    def __str__(self):
        return "⊗".join(self.letters)

    @classmethod
    def from_message(cls, bits: str) -> "PauliWord":
        if len(bits) % 2 or set(bits) - {"0", "1"}:
            raise ArgumentError(f"message must be an even-length bitstring, got {bits!r}")
        return cls("".join(BITS_PAULI[bits[i:i + 2]] for i in range(0, len(bits), 2)))

    def to_message(self) -> str:
        return "".join(PAULI_BITS[c] for c in self.letters)


def apply_pauli(state: StateVector, word: PauliWord | str, qubits) -> StateVector:
    word = PauliWord(word) if isinstance(word, str) else word
    qubits = tuple(qubits)
    if len(qubits) != len(word.letters):
        raise ArgumentError(f"{len(word.letters)} Pauli letters for {len(qubits)} qubits")
    if len(set(qubits)) != len(qubits):
        raise ArgumentError(f"repeated qubits in {qubits}")
    for letter, q in zip(word.letters, qubits):
        if letter != "I":
            state = apply_gate(state, GateApplication(NAMED[letter], q, label=letter))
    return state


# -- dense coding --------------------------------------------------------------


@dataclass(frozen=True)
class CodebookEntry:
    message: str
    word: PauliWord
    label: str


@dataclass(frozen=True)
class Codebook:
    family: str
    qubits: tuple[int, int]
    entries: tuple[CodebookEntry, ...]

    def encode(self, message: str) -> CodebookEntry:
        for e in self.entries:
            if e.message == message:
                return e
        raise ArgumentError(f"{message!r} is not a 4-bit message")

    def decode(self, label: str) -> str:
        for e in self.entries:
            if e.label == label:
                return e.message
        raise ProtocolError(f"NDD label {label} is not in the codebook")


def _holder_qubits(holder) -> tuple[int, int]:
    if isinstance(holder, str):
        try:
            return HOLDERS[holder]
        except KeyError:
            raise ArgumentError(f"unknown holder {holder!r}; expected one of {sorted(HOLDERS)}") from None
    qubits = tuple(int(q) for q in holder)
    if len(qubits) != 2 or len(set(qubits)) != 2 or not all(1 <= q <= 4 for q in qubits):
        raise ArgumentError(f"holder must be two distinct qubits of |C4>, got {holder!r}")
    return qubits


def encoding_labels(holder, family=C4) -> dict[str, str]:
    """NDD label of every two-qubit Pauli encoding on ``holder``'s qubits.

    Raises ContractViolation if any encoding gives a non-deterministic
    outcome. Distinctness is not checked here.
    """
    fam = get_family(family)
    if fam is not C4:
        raise ArgumentError("dense-coding dialogue is defined for C4 only")
    qubits = _holder_qubits(holder)
    base = canonical_state(fam)
    labels = {}
    for message in (format(k, "04b") for k in range(16)):
        outcomes = branch_ndd(apply_pauli(base, PauliWord.from_message(message), qubits), fam)
        if len(outcomes) != 1:
            raise ContractViolation(f"encoding {message} gives {len(outcomes)} NDD branches")
        labels[message] = outcomes[0].label
    return labels


@functools.lru_cache(maxsize=None)
def _codebook(qubits: tuple[int, int]) -> Codebook:
    labels = encoding_labels(qubits)
    if len(set(labels.values())) != 16:
        raise ContractViolation(
            f"Pauli encodings on qubits {qubits} reach only {len(set(labels.values()))} "
            "distinct NDD labels; a 4-bit codebook needs 16"
        )
    entries = tuple(CodebookEntry(m, PauliWord.from_message(m), lab) for m, lab in labels.items())
    return Codebook("C4", qubits, entries)


def build_codebook(holder="first-two-qubits", family=C4) -> Codebook:
    if get_family(family) is not C4:
        raise ArgumentError("dense-coding dialogue is defined for C4 only")
    return _codebook(_holder_qubits(holder))


@dataclass(frozen=True)
class DialogueTurn:
    speaker: str
    message: str
    label: str
    decoded: str
    fidelity: float


@dataclass(frozen=True)
class DialogueTranscript:
    pairing: dict = field(hash=False)
    turns: tuple[DialogueTurn, ...] = ()

    def to_dict(self) -> dict:
        return {
            "pairing": {k: list(v) for k, v in self.pairing.items()},
            "turns": [vars(t) for t in self.turns],
        }


def _check_message(m: str) -> str:
    if not isinstance(m, str) or len(m) != 4 or set(m) - {"0", "1"}:
        raise ArgumentError(f"messages must be 4-bit strings, got {m!r}")
    return m


def dialogue_run(messages, seed: int, pairing: dict | None = None) -> DialogueTranscript:
    """Alternate dense-coded turns over one reusable |C4> channel.

    Turn k is spoken by the ``k % 2``-th party of ``pairing``. The speaker
    applies their codebook Pauli, the listener runs NDD on the four qubits
    and decodes, then the Pauli is undone to restore the channel.
    """
    messages = [_check_message(m) for m in messages]
    pairing = dict(DEFAULT_PAIRING if pairing is None else pairing)
    speakers = list(pairing)
    books = {name: build_codebook(pairing[name]) for name in speakers}
    reference = canonical_state(C4)
    channel = reference
    seeds = np.random.default_rng(seed).integers(0, 2**63, size=len(messages))
    turns = []
    for k, message in enumerate(messages):
        name = speakers[k % len(speakers)]
        book = books[name]
        entry = book.encode(message)
        sent = apply_pauli(channel, entry.word, book.qubits)
        outcome = run_ndd(sent, C4, int(seeds[k]))
        decoded = book.decode(outcome.label)
        if decoded != message:
            raise ProtocolError(f"turn {k}: sent {message}, decoded {decoded}")
        channel = apply_pauli(outcome.post_state, entry.word, book.qubits)
        turns.append(DialogueTurn(name, message, outcome.label, decoded,
                                  fidelity_up_to_phase(channel, reference)))
    return DialogueTranscript(pairing, tuple(turns))


# -- error detection --------------------------------------------------------------

# Identity plus 4 qubits x 3 kinds is 13 cases, and stabilizer identities
# merge some of them (Z1 ~ Z2, Z3 ~ Z4). The table reports the label count it
# actually reaches next to CLAIMED_DISTINCT_STATES.

ERROR_KINDS = {"bit-flip": "X", "phase-flip": "Z", "both": "ZX"}
_ZX = NAMED["Z"] @ NAMED["X"]


def inject_error(state: StateVector, qubit: int, kind: str) -> StateVector:
    """Bit flip (X), phase flip (Z) or both (Z·X) on one qubit."""
    if kind not in ERROR_KINDS:
        raise ArgumentError(f"unknown error kind {kind!r}; expected one of {sorted(ERROR_KINDS)}")
    if not 1 <= qubit <= state.n_qubits:
        raise ArgumentError(f"qubit {qubit} outside [1, {state.n_qubits}]")
    matrix = _ZX if kind == "both" else NAMED[ERROR_KINDS[kind]]
    return apply_gate(state, GateApplication(matrix, qubit, label=ERROR_KINDS[kind]))


NO_ERROR = None

CLAIMED_DISTINCT_STATES = 16


@dataclass(frozen=True)
class SyndromeTable:
    family: str
    cases: tuple[tuple[tuple[int, str] | None, str], ...]

    @property
    def entries(self) -> dict[str, list]:
        out: dict[str, list] = {}
        for case, label in self.cases:
            out.setdefault(label, []).append(case)
        return out

    @property
    def distinct_labels(self) -> int:
        return len(self.entries)

    @property
    def collisions(self) -> dict[str, list]:
        return {lab: cases for lab, cases in self.entries.items() if len(cases) > 1}

    def diagnose(self, label: str) -> list:
        return list(self.entries.get(label, []))

    def report_lines(self) -> list[str]:
        lines = []
        for case, label in self.cases:
            what = "no error" if case is None else f"qubit {case[0]} {case[1]}"
            lines.append(f"{what:<20} -> {label}")
        summary = f"distinct labels reached: {self.distinct_labels} (from {len(self.cases)} cases"
        if self.family == "C4":
            summary += f"; claimed: {CLAIMED_DISTINCT_STATES}"
        lines.append(summary + ")")
        for label, cases in sorted(self.collisions.items()):
            names = ", ".join(f"qubit {q} {k}" for q, k in cases)
            lines.append(f"collision on {label}: {names}")
        return lines

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "cases": [
                {"error": None if c is None else {"qubit": c[0], "kind": c[1]}, "label": lab}
                for c, lab in self.cases
            ],
            "distinct_labels": self.distinct_labels,
            "claimed_distinct_states": CLAIMED_DISTINCT_STATES,
            "collisions": {lab: [list(c) for c in cases] for lab, cases in self.collisions.items()},
        }


def build_syndrome_table(family=C4) -> SyndromeTable:
    """NDD label of the canonical state under no error and every single-qubit error."""
    fam = get_family(family)
    base = canonical_state(fam)
    cases = [(NO_ERROR, base)]
    for q in range(1, fam.n_data + 1):
        for kind in ERROR_KINDS:
            cases.append(((q, kind), inject_error(base, q, kind)))
    out = []
    for case, state in cases:
        outcomes = branch_ndd(state, fam)
        if len(outcomes) != 1:
            raise ContractViolation(f"error case {case} gives {len(outcomes)} NDD branches")
        out.append((case, outcomes[0].label))
    return SyndromeTable(fam.name, tuple(out))


def diagnose(table: SyndromeTable, label: str) -> list:
    return table.diagnose(label)
