"""Non-destructive discrimination of cluster-basis states.

Each ancilla bit reads out the eigenvalue of one Pauli observable that every
table row is an eigenstate of. ``(-1)^bit`` is that eigenvalue, so the
measured ancilla string is exactly the row label. The observables are found
by searching Pauli words against the table rows themselves. The circuit
is therefore pinned to the tables, not to a hand transcription.

Observable readout per ancilla ``a``:

* ``Z``-only words: CNOT from each ``Z`` qubit onto ``a`` (parity check).
* otherwise: ``H(a)``, then controlled-``X``/``Z``/``Y`` from ``a`` onto the
  data qubits, then ``H(a)``.

Ancillas are qubits ``n_data+1 .. 2*n_data``, prepared in ``|0>``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .cluster import ClusterFamily, get_family, table_rows
from .errors import ArgumentError, ConfigurationError, ContractViolation
from .gates import Circuit, cnot, cz, named_gate, run_circuit
from .qstate import (
    StateVector, basis_state, branch_enumerate, fidelity_up_to_phase, measure,
)

EIGEN_TOL = 1e-10


def pauli_action(word: str, amps: np.ndarray) -> np.ndarray:
    """Apply the Pauli word (big-endian letters) to a dense amplitude vector."""
    n = len(word)
    psi = amps.reshape((2,) * n)
    for axis, letter in enumerate(word):
        if letter == "I":
            continue
        if letter in "XY":
            psi = np.flip(psi, axis=axis)
        if letter in "YZ":
            sign = np.array([1, -1]) if letter == "Z" else np.array([-1j, 1j])
            shape = [1] * n
            shape[axis] = 2
            psi = psi * sign.reshape(shape)
    return psi.reshape(-1)


def _eigenvalue(word: str, amps: np.ndarray) -> float | None:
    image = pauli_action(word, amps)
    lam = np.vdot(amps, image)
    if np.allclose(image, lam * amps, atol=EIGEN_TOL, rtol=0) and abs(abs(lam) - 1) < EIGEN_TOL:
        return float(lam.real)
    return None


def _search_order(n: int):
    words = ("".join(w) for w in itertools.product("IXYZ", repeat=n))
    return sorted(words, key=lambda w: (w.count("Y"), n - w.count("I"), w))


@dataclass(frozen=True)
class Observable:
    word: str
    sign: int = 1

    def __str__(self):
        return ("+" if self.sign > 0 else "-") + self.word


@functools.lru_cache(maxsize=None)
def label_observables(family: ClusterFamily) -> tuple[Observable, ...]:
    """One signed Pauli observable per label bit, derived from the repaired rows.

    Bit k of row r must equal 0 when ``sign * word`` has eigenvalue +1 on
    row r, and 1 when it has eigenvalue -1.
    """
    rows = table_rows(family, repaired=True)
    labels = sorted(rows)
    vecs = [rows[lab].state().amps for lab in labels]
    wanted = [np.array([1 - 2 * int(lab[k]) for lab in labels]) for k in range(family.n_data)]
    found: list[Observable | None] = [None] * family.n_data
    for word in _search_order(family.n_data):
        lams = []
        for v in vecs:
            lam = _eigenvalue(word, v)
            if lam is None:
                break
            lams.append(lam)
        else:
            lams = np.array(lams)
            for k, target in enumerate(wanted):
                if found[k] is not None:
                    continue
                for sign in (1, -1):
                    if np.allclose(sign * lams, target, atol=EIGEN_TOL):
                        found[k] = Observable(word, sign)
        if all(found):
            return tuple(found)
    raise ContractViolation(f"{family} rows admit no Pauli readout for every label bit")


@dataclass(frozen=True, eq=False)
class NddCircuit:
    family: ClusterFamily
    observables: tuple[Observable, ...]
    circuit: Circuit

    @property
    def n_data(self) -> int:
        return self.family.n_data

    @property
    def total_qubits(self) -> int:
        return 2 * self.family.n_data

    @property
    def ancillas(self) -> list[int]:
        return list(range(self.n_data + 1, self.total_qubits + 1))


def _readout(obs: Observable, ancilla: int) -> list:
    ops = []
    if set(obs.word) <= {"I", "Z"}:
        for q, letter in enumerate(obs.word, 1):
            if letter == "Z":
                ops.extend(cnot(q, ancilla))
    else:
        ops.append(named_gate("H", ancilla))
        for q, letter in enumerate(obs.word, 1):
            if letter == "X":
                ops.extend(cnot(ancilla, q))
            elif letter == "Z":
                ops.extend(cz(ancilla, q))
            elif letter == "Y":
                ops.append(named_gate("Y", q, [ancilla]))
        ops.append(named_gate("H", ancilla))
    if obs.sign < 0:
        ops.append(named_gate("X", ancilla))
    return ops


@functools.lru_cache(maxsize=None)
def _build(family: ClusterFamily) -> NddCircuit:
    observables = label_observables(family)
    n = family.n_data
    ops = []
    for k, obs in enumerate(observables):
        ops.extend(_readout(obs, n + 1 + k))
    return NddCircuit(family, observables, Circuit(2 * n, tuple(ops)))


def build_ndd_circuit(family, repaired: bool = True) -> NddCircuit:
    fam = get_family(family)
    if not repaired and table_rows(fam) != table_rows(fam, repaired=True):
        raise ConfigurationError(
            f"the verbatim {fam} table is not an orthonormal basis; NDD needs repaired=True"
        )
    return _build(fam)


@dataclass(frozen=True, eq=False)
class NddOutcome:
    label: str
    probability: float
    post_state: StateVector


def _data_part(joint: StateVector, label: str, n_data: int) -> StateVector:
    # after the ancilla measurement the joint state is |data> ⊗ |label>
    block = joint.amps.reshape(2**n_data, 2**n_data)[:, int(label, 2)]
    return StateVector.from_amplitudes(block, normalize=True)


def _prepare(state: StateVector, family, repaired: bool) -> tuple[NddCircuit, StateVector]:
    ndd = build_ndd_circuit(family, repaired)
    if state.n_qubits != ndd.n_data:
        raise ArgumentError(
            f"{ndd.family} NDD needs a {ndd.n_data}-qubit register, got {state.n_qubits}"
        )
    joint = state.tensor(basis_state(ndd.n_data, "0" * ndd.n_data))
    return ndd, run_circuit(ndd.circuit, joint)


def branch_ndd(state: StateVector, family, repaired: bool = True) -> list[NddOutcome]:
    """All NDD outcomes with nonzero probability, without sampling."""
    ndd, joint = _prepare(state, family, repaired)
    return [
        NddOutcome(b.bits, b.probability, _data_part(b.post_state, b.bits, ndd.n_data))
        for b in branch_enumerate(joint, ndd.ancillas)
    ]


def run_ndd(state: StateVector, family, seed: int, repaired: bool = True) -> NddOutcome:
    """Attach fresh ancillas, run the NDD circuit, measure them, discard them."""
    ndd, joint = _prepare(state, family, repaired)
    b = measure(joint, ndd.ancillas, seed)
    return NddOutcome(b.bits, b.probability, _data_part(b.post_state, b.bits, ndd.n_data))


def ancilla_residue(state: StateVector, family, label: str) -> float:
    """Fidelity between the collapsed joint state and ``data ⊗ |label>``.

    Equals 1 when the ancillas are exactly disentangled after measurement.
    """
    ndd, joint = _prepare(state, family, True)
    branch = next(b for b in branch_enumerate(joint, ndd.ancillas) if b.bits == label)
    data = _data_part(branch.post_state, label, ndd.n_data)
    product = data.tensor(basis_state(ndd.n_data, label))
    return fidelity_up_to_phase(product, branch.post_state)
