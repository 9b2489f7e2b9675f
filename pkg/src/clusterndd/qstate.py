"""Dense statevector kernel.

Amplitudes are stored big-endian: qubit 1 is the most significant bit of
the amplitude index, so ``|b1 b2 ... bn>`` lives at ``int("b1b2...bn", 2)``.
Qubit indices are 1-based at every public entry point.

Sampling uses ``numpy.random.default_rng(seed)`` (PCG64), so a given
``(state, targets, seed)`` triple always yields the same branch.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, CapacityError, ValidationError

MAX_QUBITS = 24
NORM_TOL = 1e-12
UNITARY_TOL = 1e-10
BRANCH_CUTOFF = 1e-12


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state on ``n_qubits`` qubits."""

    n_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        n = self.n_qubits
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ArgumentError(f"n_qubits must be a positive integer, got {n!r}")
        if n > MAX_QUBITS:
            raise CapacityError(f"{n} qubits exceeds the cap of {MAX_QUBITS}")
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != 2**n:
            raise ArgumentError(f"expected {2**n} amplitudes, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise ValidationError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state is not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "n_qubits", int(n))
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amplitudes(cls, amps, normalize: bool = True) -> "StateVector":
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        n = int(round(math.log2(amps.size))) if amps.size else 0
        if amps.size == 0 or 2**n != amps.size:
            raise ArgumentError(f"amplitude count {amps.size} is not a power of two")
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ValidationError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(n, amps)

    def tensor(self, other: "StateVector") -> "StateVector":
        """``self ⊗ other``; ``other``'s qubits are appended after ``self``'s."""
        return StateVector(self.n_qubits + other.n_qubits, np.kron(self.amps, other.amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits}, {format_kets(self)})"


@dataclass(frozen=True, eq=False)
class MeasurementBranch:
    bits: str
    probability: float
    post_state: StateVector


def _check_bits(bits: str, n: int | None = None) -> str:
    if not isinstance(bits, str) or not bits or set(bits) - {"0", "1"}:
        raise ArgumentError(f"expected a non-empty bitstring, got {bits!r}")
    if n is not None and len(bits) != n:
        raise ArgumentError(f"bitstring {bits!r} has length {len(bits)}, expected {n}")
    return bits


def basis_state(n: int, bits: str) -> StateVector:
    """Computational basis state ``|bits>`` on ``n`` qubits."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ArgumentError(f"n must be a positive integer, got {n!r}")
    if n > MAX_QUBITS:
        raise CapacityError(f"{n} qubits exceeds the cap of {MAX_QUBITS}")
    _check_bits(bits, n)
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[int(bits, 2)] = 1.0
    return StateVector(n, amps)


def _check_qubits(qubits: Iterable[int], n: int, what: str = "qubit") -> list[int]:
    out = []
    for q in qubits:
        if not isinstance(q, (int, np.integer)) or not 1 <= q <= n:
            raise ArgumentError(f"{what} index {q!r} outside [1, {n}]")
        out.append(int(q))
    if len(set(out)) != len(out):
        raise ArgumentError(f"repeated {what} indices in {out}")
    return out


def apply_gate(state: StateVector, gate) -> StateVector:
    """Apply a (possibly controlled) single-qubit gate.

    ``gate`` is a :class:`clusterndd.gates.GateApplication`. Only amplitudes
    whose positive controls read 1 and negative controls read 0 are touched.
    """
    n = state.n_qubits
    pos = sorted(gate.positive_controls)
    neg = sorted(gate.negative_controls)
    _check_qubits([gate.target, *pos, *neg], n)

    psi = state.amps.reshape((2,) * n).copy()
    index: list = [slice(None)] * n
    for c in pos:
        index[c - 1] = 1
    for c in neg:
        index[c - 1] = 0
    index = tuple(index)
    # integer indices drop axes, so the target axis shifts left by the
    # number of controls that precede it
    axis = gate.target - 1 - sum(1 for c in (*pos, *neg) if c < gate.target)
    sub = psi[index]
    out = np.tensordot(gate.matrix, sub, axes=([1], [axis]))
    psi[index] = np.moveaxis(out, 0, axis)
    return StateVector(n, psi.reshape(-1))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.n_qubits != b.n_qubits:
        raise ArgumentError(f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    return complex(np.vdot(a.amps, b.amps))


def fidelity_up_to_phase(a: StateVector, b: StateVector) -> float:
    return abs(inner_product(a, b)) ** 2


def marginal_probabilities(state: StateVector, targets: Sequence[int]) -> np.ndarray:
    """Outcome distribution over ``targets``; entry k is outcome ``format(k, 'b')``."""
    n = state.n_qubits
    targets = _targets(targets, n)
    probs = state.probabilities().reshape((2,) * n)
    rest = tuple(i for i in range(n) if i + 1 not in targets)
    marg = probs.sum(axis=rest) if rest else probs
    # summed tensor has target axes in ascending qubit order
    order = sorted(targets)
    marg = np.transpose(marg, [order.index(t) for t in targets])
    return marg.reshape(-1)


def _targets(targets: Sequence[int], n: int) -> list[int]:
    targets = list(targets)
    if not targets:
        raise ArgumentError("measurement needs at least one target")
    return _check_qubits(targets, n, "target")


def _collapse(state: StateVector, targets: list[int], bits: str, prob: float) -> StateVector:
    n = state.n_qubits
    psi = np.zeros((2,) * n, dtype=np.complex128)
    index: list = [slice(None)] * n
    for t, b in zip(targets, bits):
        index[t - 1] = int(b)
    index = tuple(index)
    psi[index] = state.amps.reshape((2,) * n)[index]
    return StateVector(n, psi.reshape(-1) / math.sqrt(prob))


def branch_enumerate(state: StateVector, targets: Sequence[int]) -> list[MeasurementBranch]:
    """Every measurement branch with probability above ``BRANCH_CUTOFF``."""
    targets = _targets(targets, state.n_qubits)
    probs = marginal_probabilities(state, targets)
    k = len(targets)
    branches = []
    for outcome, p in enumerate(probs):
        if p > BRANCH_CUTOFF:
            bits = format(outcome, f"0{k}b")
            branches.append(MeasurementBranch(bits, float(p), _collapse(state, targets, bits, p)))
    return branches


def measure(state: StateVector, targets: Sequence[int], seed: int) -> MeasurementBranch:
    """Sample one Born-rule branch using a PCG64 generator seeded with ``seed``."""
    targets = _targets(targets, state.n_qubits)
    probs = marginal_probabilities(state, targets)
    rng = np.random.default_rng(seed)
    outcome = int(rng.choice(probs.size, p=probs / probs.sum()))
    bits = format(outcome, f"0{len(targets)}b")
    p = float(probs[outcome])
    return MeasurementBranch(bits, p, _collapse(state, targets, bits, p))


# -- rendering and serialization ---------------------------------------------

_MINUS = "−"


def _magnitude_text(m: float) -> str:
    k = -2 * math.log2(m)
    if abs(k - round(k)) < 1e-9 and round(k) >= 0:
        k = int(round(k))
        whole, root = divmod(k, 2)
        if k == 0:
            return "1"
        if root == 0:
            return f"1/{2**whole}"
        return "1/√2" if whole == 0 else f"1/({2**whole}√2)"
    return f"{m:.12g}"


def format_kets(state: StateVector, tol: float = 1e-10) -> str:
    """Signed-ket text, e.g. ``1/2(|0000⟩+|0011⟩+|1100⟩−|1111⟩)``.

    The phase of the first nonzero term is factored out so that term prints
    unsigned. Equal-magnitude real superpositions get a common prefactor;
    anything else prints explicit coefficients.
    """
    n = state.n_qubits
    nz = [(i, a) for i, a in enumerate(state.amps) if abs(a) > tol]
    lead_phase = nz[0][1] / abs(nz[0][1])
    rel = [(i, a / lead_phase) for i, a in nz]
    mags = [abs(a) for _, a in rel]
    real = all(abs(a.imag) < tol for _, a in rel)
    if real and max(mags) - min(mags) < tol:
        body = ""
        for j, (i, a) in enumerate(rel):
            sign = _MINUS if a.real < 0 else ("+" if j else "")
            body += f"{sign}|{format(i, f'0{n}b')}⟩"
        prefix = _magnitude_text(mags[0])
    else:
        terms = []
        for i, a in rel:
            terms.append(f"({a.real:+.6g}{a.imag:+.6g}j)|{format(i, f'0{n}b')}⟩")
        body, prefix = "+".join(terms), ""
    out = f"{prefix}({body})" if prefix and prefix != "1" else body
    if abs(lead_phase - 1) < tol:
        return out
    if abs(lead_phase + 1) < tol:
        return _MINUS + out
    return f"e^(i{cmath.phase(lead_phase):.6g})·{out}"


def state_to_dict(state: StateVector) -> dict:
    return {
        "n_qubits": state.n_qubits,
        "amps": [[float(a.real), float(a.imag)] for a in state.amps],
    }


def state_from_dict(doc: dict) -> StateVector:
    try:
        n = int(doc["n_qubits"])
        amps = np.array([complex(re, im) for re, im in doc["amps"]], dtype=np.complex128)
    except (KeyError, TypeError, ValueError) as exc:
        raise ArgumentError(f"malformed state document: {exc}") from exc
    return StateVector(n, amps)


def dumps_state(state: StateVector) -> str:
    # json emits repr() floats: shortest round-tripping form, up to 17 digits
    return json.dumps(state_to_dict(state), indent=1)


def loads_state(text: str) -> StateVector:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"state document is not valid JSON: {exc}") from exc
    return state_from_dict(doc)
