"""Four- and five-qubit cluster bases: embedded tables, audit, generators.

The tables map each ancilla label to a signed sum of four kets with
coefficient 1/2. They are stored verbatim in ``data/`` and checked against
recorded SHA-256 digests on load. The five-qubit table as printed is not
orthonormal. :func:`audit_orthogonality` reports the defect and the unique
single-sign repair, and ``repaired=True`` applies it explicitly.
"""

from __future__ import annotations

import functools
import hashlib
import itertools
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ArgumentError, ContractViolation, TableIntegrityError
from .gates import Circuit, cnot, cz, named_gate, run_circuit
from .qstate import StateVector, basis_state, fidelity_up_to_phase

ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class ClusterFamily:
    name: str
    n_data: int
    table_file: str
    digest: str

    @property
    def n_rows(self) -> int:
        return 2**self.n_data

    @property
    def labels(self) -> list[str]:
        return [format(k, f"0{self.n_data}b") for k in range(self.n_rows)]

    def __str__(self):
        return self.name


C4 = ClusterFamily("C4", 4, "table_c4.txt",
                   "62fb60744ef82b058dff9857ead391d210721c6c5f2c61c884d6c38b894a102e")
C5 = ClusterFamily("C5", 5, "table_c5.txt",
                   "728ae7d97b1780bff2207db398ee61843f16a979ffb97699d2d160e1a1f94f43")
FAMILIES = {"C4": C4, "C5": C5}


def get_family(family) -> ClusterFamily:
    if isinstance(family, ClusterFamily):
        return family
    try:
        return FAMILIES[str(family).upper()]
    except KeyError:
        raise ArgumentError(f"unknown cluster family {family!r}; expected c4 or c5") from None


@dataclass(frozen=True)
class TableRow:
    label: str
    terms: tuple[tuple[str, int], ...]

    def __post_init__(self):
        kets = [k for k, _ in self.terms]
        if len(self.terms) != 4 or len(set(kets)) != 4:
            raise ArgumentError(f"row {self.label}: expected four distinct kets, got {kets}")
        if any(s not in (1, -1) for _, s in self.terms):
            raise ArgumentError(f"row {self.label}: signs must be +1 or -1")

    @property
    def support(self) -> frozenset:
        return frozenset(k for k, _ in self.terms)

    def state(self) -> StateVector:
        n = len(self.label)
        amps = np.zeros(2**n, dtype=np.complex128)
        for ket, sign in self.terms:
            amps[int(ket, 2)] = 0.5 * sign
        return StateVector(n, amps)

    def with_flip(self, ket: str) -> "TableRow":
        return TableRow(self.label, tuple((k, -s if k == ket else s) for k, s in self.terms))

    def text(self) -> str:
        return f"{self.label} : " + " ".join(("+" if s > 0 else "-") + k for k, s in self.terms)


def parse_table(text: str, n_data: int) -> dict[str, TableRow]:
    rows = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        label, sep, body = line.partition(":")
        label = label.strip()
        if not sep or len(label) != n_data or set(label) - {"0", "1"}:
            raise ArgumentError(f"table line {lineno}: bad label in {raw!r}")
        terms = []
        for tok in body.split():
            sign, ket = tok[0], tok[1:]
            if sign not in "+-" or len(ket) != n_data or set(ket) - {"0", "1"}:
                raise ArgumentError(f"table line {lineno}: bad term {tok!r}")
            terms.append((ket, 1 if sign == "+" else -1))
        if label in rows:
            raise ArgumentError(f"table line {lineno}: duplicate label {label}")
        rows[label] = TableRow(label, tuple(terms))
    return rows


def read_table_text(family, path: str | Path | None = None) -> str:
    fam = get_family(family)
    if path is not None:
        return Path(path).read_text(encoding="utf-8")
    return resources.files("clusterndd").joinpath("data").joinpath(fam.table_file).read_text(encoding="utf-8")


def load_table(family, path: str | Path | None = None, check_digest: bool = True) -> dict[str, TableRow]:
    """Rows of the printed table, keyed by label.

    With ``check_digest`` the raw file must match the recorded SHA-256, so
    stray edits to the data files are caught.
    """
    fam = get_family(family)
    text = read_table_text(fam, path)
    if check_digest:
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        if digest != fam.digest:
            raise TableIntegrityError(f"{fam} table digest mismatch: {digest}")
    rows = parse_table(text, fam.n_data)
    if sorted(rows) != fam.labels:
        raise ArgumentError(f"{fam} table must have exactly the labels {fam.labels[0]}..{fam.labels[-1]}")
    return rows


@functools.lru_cache(maxsize=None)
def _embedded(family: ClusterFamily) -> dict[str, TableRow]:
    return load_table(family)


# -- audit -------------------------------------------------------------------------


@dataclass(frozen=True)
class Repair:
    label: str
    ket: str
    new_sign: int


@dataclass(frozen=True)
class AuditReport:
    family: ClusterFamily
    non_orthogonal_pairs: tuple[tuple[str, str, complex], ...]
    suggested_repairs: tuple[Repair, ...]
    ambiguous_blocks: tuple[frozenset, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.non_orthogonal_pairs

    def lines(self) -> list[str]:
        out = [f"family {self.family}: {len(self.non_orthogonal_pairs)} non-orthogonal pair(s)"]
        for a, b, ip in self.non_orthogonal_pairs:
            out.append(f"  <{a}|{b}> = {ip.real:+.12f}{ip.imag:+.12f}j")
        for r in self.suggested_repairs:
            sign = "+" if r.new_sign > 0 else "-"
            out.append(f"  repair: row {r.label}, term |{r.ket}> -> {sign}|{r.ket}>")
        for blk in self.ambiguous_blocks:
            out.append(f"  no unique single-sign repair for block {{{', '.join(sorted(blk))}}}")
        return out

    def to_dict(self) -> dict:
        return {
            "family": self.family.name,
            "non_orthogonal_pairs": [
                {"a": a, "b": b, "inner_product": [ip.real, ip.imag]}
                for a, b, ip in self.non_orthogonal_pairs
            ],
            "suggested_repairs": [
                {"label": r.label, "ket": r.ket, "new_sign": r.new_sign} for r in self.suggested_repairs
            ],
        }


def _gram(rows: dict[str, TableRow], labels: list[str]) -> np.ndarray:
    m = np.array([rows[lab].state().amps for lab in labels])
    return m.conj() @ m.T


def _offending_pairs(rows: dict[str, TableRow], tol: float = ORTHO_TOL):
    labels = sorted(rows)
    gram = _gram(rows, labels)
    pairs = []
    for i, j in itertools.combinations(range(len(labels)), 2):
        if abs(gram[i, j]) > tol:
            pairs.append((labels[i], labels[j], complex(gram[i, j])))
    return pairs


def audit_orthogonality(family, rows: dict[str, TableRow] | None = None) -> AuditReport:
    """Pairwise inner products of the rows, with single-sign repair search.

    A repair is suggested for a support block (the rows sharing one set of
    four kets) only when exactly one single-sign flip in that block makes
    the block pairwise orthogonal.
    """
    fam = get_family(family)
    rows = _embedded(fam) if rows is None else rows
    bad = _offending_pairs(rows)
    blocks = {rows[a].support for a, b, _ in bad if rows[a].support == rows[b].support}
    repairs, ambiguous = [], []
    for block in sorted(blocks, key=sorted):
        members = {lab: row for lab, row in rows.items() if row.support == block}
        fixes = []
        for lab, row in sorted(members.items()):
            for ket, sign in row.terms:
                trial = dict(members)
                trial[lab] = row.with_flip(ket)
                if not _offending_pairs(trial):
                    fixes.append(Repair(lab, ket, -sign))
        if len(fixes) == 1:
            repairs.extend(fixes)
        else:
            ambiguous.append(block)
    return AuditReport(fam, tuple(bad), tuple(repairs), tuple(ambiguous))


def apply_repairs(rows: dict[str, TableRow], repairs) -> dict[str, TableRow]:
    rows = dict(rows)
    for r in repairs:
        row = rows[r.label]
        current = dict(row.terms)[r.ket]
        if current != r.new_sign:
            rows[r.label] = row.with_flip(r.ket)
    return rows


@functools.lru_cache(maxsize=None)
def _repaired(family: ClusterFamily) -> dict[str, TableRow]:
    rows = _embedded(family)
    return apply_repairs(rows, audit_orthogonality(family, rows).suggested_repairs)


def table_rows(family, repaired: bool = False) -> dict[str, TableRow]:
    fam = get_family(family)
    return dict(_repaired(fam) if repaired else _embedded(fam))


def table_state(family, label: str, repaired: bool = False) -> StateVector:
    fam = get_family(family)
    rows = _repaired(fam) if repaired else _embedded(fam)
    if label not in rows:
        raise ArgumentError(f"{label!r} is not a {fam} row label")
    return rows[label].state()


def canonical_state(family) -> StateVector:
    """The all-zeros row of the repaired table (the family's reference state)."""
    fam = get_family(family)
    return table_state(fam, "0" * fam.n_data, repaired=True)


# -- generators ----------------------------------------------------------------------


def reference_generator(family) -> Circuit:
    fam = get_family(family)
    if fam is C4:
        return Circuit.build(4, named_gate("H", 1), named_gate("H", 3),
                             cnot(1, 2), cnot(3, 4), cz(2, 3))
    return Circuit.build(5, named_gate("H", 1), named_gate("H", 3),
                         cnot(1, 2), cnot(3, 4), cnot(3, 5), cnot(1, 4))


def generate(family, input_bits: str) -> StateVector:
    fam = get_family(family)
    return run_circuit(reference_generator(fam), basis_state(fam.n_data, input_bits))


def match_row(family, state: StateVector, repaired: bool = True, tol: float = ORTHO_TOL) -> str | None:
    """Label of the row equal to ``state`` up to global phase, if any."""
    fam = get_family(family)
    for label, row in table_rows(fam, repaired).items():
        if fidelity_up_to_phase(row.state(), state) > 1 - tol:
            return label
    return None


def input_to_row_map(family) -> dict[str, str]:
    """Which repaired row each computational input is mapped to by the generator."""
    fam = get_family(family)
    mapping = {}
    for bits in fam.labels:
        label = match_row(fam, generate(fam, bits))
        if label is None:
            raise ContractViolation(f"{fam} generator output for |{bits}> matches no table row")
        mapping[bits] = label
    if len(set(mapping.values())) != len(mapping):
        raise ContractViolation(f"{fam} generator does not map inputs onto rows bijectively")
    return mapping


def product_formula_state(n: int) -> StateVector:
    """Expand ``2^{-n/2} ⊗_a (|0>_a Z_{a+1} + |1>_a)`` term by term, with Z_{n+1} = 1.

    Each ``Z_{a+1}`` attached to ``|0>_a`` contributes -1 exactly when bit
    a+1 is 1, so basis state b carries sign (-1)^#{a : b_a = 0, b_{a+1} = 1}.
    Kept deliberately independent of the circuit machinery.
    """
    amps = np.empty(2**n)
    for index in range(2**n):
        bits = format(index, f"0{n}b")
        flips = sum(1 for a in range(n - 1) if bits[a] == "0" and bits[a + 1] == "1")
        amps[index] = (-1) ** flips
    return StateVector(n, amps / 2 ** (n / 2))
