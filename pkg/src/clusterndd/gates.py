"""Gate constructors, circuits and whole-circuit unitarity checks.

Every gate is a single-qubit unitary with optional positive (condition on
|1>) and negative (condition on |0>) controls. Multi-qubit operations used
here (CNOT, CZ, SWAP) are expressed as short sequences of those.

Circuit text format, one op per line::

    qubits 4          # optional header; otherwise the largest index is used
    H 1
    X 2 +1            # CNOT, control 1 -> target 2
    Z 3 +2            # CZ between 2 and 3
    X 2 -1            # X on 2 when qubit 1 reads 0 (open-circle control)

``CNOT`` and ``CZ`` are accepted as aliases of ``X`` and ``Z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .errors import ArgumentError, ValidationError
from .qstate import UNITARY_TOL, StateVector, apply_gate, basis_state

SQRT1_2 = 1 / np.sqrt(2)

H = np.array([[1, 1], [1, -1]], dtype=np.complex128) * SQRT1_2
I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

NAMED = {"H": H, "I": I2, "X": X, "Y": Y, "Z": Z}


def _readonly(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=np.complex128)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class GateApplication:
    matrix: np.ndarray
    target: int
    positive_controls: frozenset = field(default_factory=frozenset)
    negative_controls: frozenset = field(default_factory=frozenset)
    label: str = "U"

    def __post_init__(self):
        m = _readonly(self.matrix)
        if m.shape != (2, 2):
            raise ValidationError(f"gate matrix must be 2x2, got shape {m.shape}")
        if not np.allclose(m.conj().T @ m, I2, atol=UNITARY_TOL, rtol=0):
            raise ValidationError(f"gate {self.label!r} matrix is not unitary")
        pos = frozenset(int(c) for c in self.positive_controls)
        neg = frozenset(int(c) for c in self.negative_controls)
        if pos & neg:
            raise ArgumentError(f"qubits {sorted(pos & neg)} are both positive and negative controls")
        if self.target in pos | neg:
            raise ArgumentError(f"target {self.target} is also a control")
        for q in (self.target, *pos, *neg):
            if q < 1:
                raise ArgumentError(f"qubit indices are 1-based, got {q}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "target", int(self.target))
        object.__setattr__(self, "positive_controls", pos)
        object.__setattr__(self, "negative_controls", neg)

    @property
    def qubits(self) -> frozenset:
        return frozenset({self.target}) | self.positive_controls | self.negative_controls

    def dagger(self) -> "GateApplication":
        return GateApplication(
            self.matrix.conj().T, self.target, self.positive_controls,
            self.negative_controls, self.label + "†",
        )

    def __repr__(self):
        ctl = "".join(f" +{c}" for c in sorted(self.positive_controls))
        ctl += "".join(f" -{c}" for c in sorted(self.negative_controls))
        return f"<{self.label} {self.target}{ctl}>"


def named_gate(name: str, target: int, controls: Iterable[int] = (),
               negative_controls: Iterable[int] = ()) -> GateApplication:
    """One of H, X, Y, Z (or I) on ``target``, optionally controlled."""
    key = name.upper()
    if key not in NAMED:
        raise ArgumentError(f"unknown gate {name!r}; expected one of {sorted(NAMED)}")
    controls, negative_controls = tuple(controls), tuple(negative_controls)
    label = "C" * (len(controls) + len(negative_controls)) + key
    return GateApplication(NAMED[key], target, frozenset(controls), frozenset(negative_controls), label)


def cnot(control: int, target: int) -> tuple[GateApplication, ...]:
    g = named_gate("X", target, [control])
    return (GateApplication(g.matrix, target, g.positive_controls, label="CNOT"),)


def cz(a: int, b: int) -> tuple[GateApplication, ...]:
    # symmetric as an operator; the larger index is stored as target so the
    # op is canonical regardless of argument order
    lo, hi = sorted((a, b))
    if lo == hi:
        raise ArgumentError(f"cz needs two distinct qubits, got {a} and {b}")
    return (GateApplication(Z, hi, frozenset({lo}), label="CZ"),)


def swap(a: int, b: int) -> tuple[GateApplication, ...]:
    return cnot(a, b) + cnot(b, a) + cnot(a, b)


OpLike = Union[GateApplication, Iterable["OpLike"]]


def _flatten(items) -> Iterable[GateApplication]:
    for item in items:
        if isinstance(item, GateApplication):
            yield item
        else:
            yield from _flatten(item)


@dataclass(frozen=True, eq=False)
class Circuit:
    n_qubits: int
    ops: tuple = ()

    def __post_init__(self):
        ops = tuple(_flatten(self.ops))
        for op in ops:
            bad = [q for q in op.qubits if q > self.n_qubits]
            if bad:
                raise ArgumentError(f"{op!r} references qubits {bad} outside [1, {self.n_qubits}]")
        object.__setattr__(self, "ops", ops)

    @classmethod
    def build(cls, n_qubits: int, *items: OpLike) -> "Circuit":
        return cls(n_qubits, tuple(_flatten(items)))

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise ArgumentError("cannot concatenate circuits of different widths")
        return Circuit(self.n_qubits, self.ops + other.ops)

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def inverse(self) -> "Circuit":
        return Circuit(self.n_qubits, tuple(op.dagger() for op in reversed(self.ops)))


def run_circuit(circuit: Circuit, state: StateVector) -> StateVector:
    if state.n_qubits != circuit.n_qubits:
        raise ArgumentError(
            f"circuit acts on {circuit.n_qubits} qubits, state has {state.n_qubits}"
        )
    for op in circuit.ops:
        state = apply_gate(state, op)
    return state


def circuit_matrix(circuit: Circuit) -> np.ndarray:
    """Full unitary; column k is the circuit applied to basis state k."""
    n = circuit.n_qubits
    cols = [run_circuit(circuit, basis_state(n, format(k, f"0{n}b"))).amps for k in range(2**n)]
    return np.column_stack(cols)


@dataclass(frozen=True)
class UnitarityReport:
    passed: bool
    max_deviation: float
    worst_pair: tuple[int, int]

    def __bool__(self):
        return self.passed


def verify_circuit_unitary(circuit: Circuit, tol: float = UNITARY_TOL) -> UnitarityReport:
    """Check orthonormality of the images of all basis states."""
    u = circuit_matrix(circuit)
    dev = np.abs(u.conj().T @ u - np.eye(u.shape[0]))
    worst = np.unravel_index(int(np.argmax(dev)), dev.shape)
    max_dev = float(dev[worst])
    return UnitarityReport(max_dev <= tol, max_dev, (int(worst[0]), int(worst[1])))


# -- text format ---------------------------------------------------------------

_ALIASES = {"CNOT": "X", "CX": "X", "CZ": "Z"}


def parse_circuit(text: str, n_qubits: int | None = None) -> Circuit:
    ops = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0].lower() == "qubits":
            if len(fields) != 2 or not fields[1].isdigit():
                raise ArgumentError(f"line {lineno}: expected 'qubits N'")
            header = int(fields[1])
            continue
        name = _ALIASES.get(fields[0].upper(), fields[0].upper())
        try:
            target = int(fields[1])
            pos = [int(f[1:]) for f in fields[2:] if f.startswith("+")]
            neg = [int(f[1:]) for f in fields[2:] if f.startswith("-")]
        except (IndexError, ValueError):
            raise ArgumentError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
        if len(pos) + len(neg) != len(fields) - 2:
            raise ArgumentError(f"line {lineno}: controls must be written +q or -q")
        ops.append(named_gate(name, target, pos, neg))
    width = n_qubits or header
    if width is None:
        width = max((max(op.qubits) for op in ops), default=1)
    return Circuit(width, tuple(ops))


def format_circuit(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.n_qubits}"]
    for op in circuit.ops:
        name = next((k for k, m in NAMED.items() if np.allclose(m, op.matrix)), None)
        if name is None:
            raise ArgumentError(f"{op!r} has no name in the text format")
        ctl = "".join(f" +{c}" for c in sorted(op.positive_controls))
        ctl += "".join(f" -{c}" for c in sorted(op.negative_controls))
        lines.append(f"{name} {op.target}{ctl}")
    return "\n".join(lines) + "\n"
