"""Grouped invariant checks behind ``clusterndd verify``.

Each group returns a list of :class:`Check`. All randomness comes from a
fixed seed, so two runs print identical output.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import cluster, gates, ndd, protocols
from .cluster import C4, C5
from .errors import ConfigurationError, ContractViolation, TableIntegrityError
from .qstate import (
    StateVector, apply_gate, branch_enumerate, fidelity_up_to_phase, inner_product, measure,
)

SEED = 20240611
TOL = 1e-10
NORM_TOL = 1e-12


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    passed: bool
    detail: str = ""


def random_state(rng: np.random.Generator, n: int) -> StateVector:
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector.from_amplitudes(v)


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_gate(rng: np.random.Generator, n: int) -> gates.GateApplication:
    """Random unitary on a random target with random positive/negative controls."""
    qubits = [int(q) + 1 for q in rng.permutation(n)]
    roles = rng.integers(0, 3, size=n - 1)  # 0 idle, 1 positive, 2 negative
    pos = frozenset(q for q, r in zip(qubits[1:], roles) if r == 1)
    neg = frozenset(q for q, r in zip(qubits[1:], roles) if r == 2)
    return gates.GateApplication(random_unitary(rng), qubits[0], pos, neg)


def shipped_circuits() -> dict[str, gates.Circuit]:
    return {
        "C4 generator": cluster.reference_generator(C4),
        "C5 generator": cluster.reference_generator(C5),
        "C4 NDD": ndd.build_ndd_circuit(C4).circuit,
        "C5 NDD": ndd.build_ndd_circuit(C5).circuit,
        "swap(1,2)": gates.Circuit.build(2, gates.swap(1, 2)),
    }


def kernel_checks(rng) -> list[Check]:
    g = "kernel"
    norm_dev = unit_dev = lin_dev = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 6))
        psi, gate = random_state(rng, n), random_gate(rng, n)
        out = apply_gate(psi, gate)
        norm_dev = max(norm_dev, abs(np.vdot(out.amps, out.amps).real - 1))
        back = apply_gate(out, gate.dagger())
        unit_dev = max(unit_dev, float(np.max(np.abs(back.amps - psi.amps))))
        phi = random_state(rng, n)
        alpha, beta = 0.6, 0.8j
        # linearity on the raw combination: rescale around the normalized state
        combo = alpha * psi.amps + beta * phi.amps
        scale = np.linalg.norm(combo)
        mix = StateVector.from_amplitudes(combo / scale, normalize=False)
        lhs = apply_gate(mix, gate).amps * scale
        rhs = alpha * apply_gate(psi, gate).amps + beta * apply_gate(phi, gate).amps
        lin_dev = max(lin_dev, float(np.max(np.abs(lhs - rhs))))
    out = [
        Check(g, "normalization preserved", norm_dev <= NORM_TOL, f"max dev {norm_dev:.2e}"),
        Check(g, "gate then inverse restores input", unit_dev <= TOL, f"max dev {unit_dev:.2e}"),
        Check(g, "linearity", lin_dev <= TOL, f"max dev {lin_dev:.2e}"),
    ]
    psum_dev, post_dev, same = 0.0, 0.0, True
    for _ in range(30):
        n = int(rng.integers(1, 6))
        psi = random_state(rng, n)
        k = int(rng.integers(1, n + 1))
        targets = [int(t) + 1 for t in rng.permutation(n)[:k]]
        branches = branch_enumerate(psi, targets)
        psum_dev = max(psum_dev, abs(sum(b.probability for b in branches) - 1))
        for b in branches:
            post_dev = max(post_dev, abs(np.vdot(b.post_state.amps, b.post_state.amps).real - 1))
        s = int(rng.integers(0, 2**31))
        m1, m2 = measure(psi, targets, s), measure(psi, targets, s)
        same &= m1.bits == m2.bits and np.array_equal(m1.post_state.amps, m2.post_state.amps)
    out += [
        Check(g, "branch probabilities sum to 1", psum_dev <= NORM_TOL, f"max dev {psum_dev:.2e}"),
        Check(g, "branch post-states normalized", post_dev <= NORM_TOL, f"max dev {post_dev:.2e}"),
        Check(g, "seeded measurement is deterministic", same),
    ]
    return out


def gate_checks(rng) -> list[Check]:
    g = "gates"
    inv_dev = 0.0
    for name in "HXYZ":
        for _ in range(5):
            n = int(rng.integers(1, 5))
            psi = random_state(rng, n)
            q = int(rng.integers(1, n + 1))
            op = gates.named_gate(name, q)
            inv_dev = max(inv_dev, float(np.max(np.abs(apply_gate(apply_gate(psi, op), op).amps - psi.amps))))
    sym_dev = 0.0
    swap_dev = 0.0
    for _ in range(10):
        psi = random_state(rng, 4)
        a, b = (int(x) + 1 for x in rng.permutation(4)[:2])
        c1 = gates.run_circuit(gates.Circuit.build(4, gates.cz(a, b)), psi)
        c2 = gates.run_circuit(gates.Circuit.build(4, gates.cz(b, a)), psi)
        sym_dev = max(sym_dev, float(np.max(np.abs(c1.amps - c2.amps))))
        u = random_unitary(rng)
        conj = gates.Circuit.build(4, gates.swap(a, b), gates.GateApplication(u, a), gates.swap(a, b))
        direct = gates.Circuit.build(4, gates.GateApplication(u, b))
        swap_dev = max(swap_dev, float(np.max(np.abs(
            gates.run_circuit(conj, psi).amps - gates.run_circuit(direct, psi).amps))))
    out = [
        Check(g, "H, X, Y, Z are involutions", inv_dev <= TOL, f"max dev {inv_dev:.2e}"),
        Check(g, "cz symmetric", sym_dev <= NORM_TOL, f"max dev {sym_dev:.2e}"),
        Check(g, "swap conjugation relabels qubits", swap_dev <= TOL, f"max dev {swap_dev:.2e}"),
    ]
    for name, circ in shipped_circuits().items():
        rep = gates.verify_circuit_unitary(circ)
        out.append(Check(g, f"{name} unitary", rep.passed, f"max dev {rep.max_deviation:.2e}"))
    return out


def table_checks(tables_dir: str | Path | None = None) -> list[Check]:
    g = "tables"
    out = []
    for fam in (C4, C5):
        path = None if tables_dir is None else Path(tables_dir) / fam.table_file
        try:
            cluster.load_table(fam, path)
            out.append(Check(g, f"{fam} digest", True))
        except TableIntegrityError as exc:
            out.append(Check(g, f"{fam} digest", False, str(exc)))
    return out


def _rows_from(fam, tables_dir):
    if tables_dir is None:
        return cluster.table_rows(fam)
    return cluster.load_table(fam, Path(tables_dir) / fam.table_file, check_digest=False)


def audit_checks(tables_dir: str | Path | None = None) -> list[Check]:
    g = "audit"
    c4 = cluster.audit_orthogonality(C4, _rows_from(C4, tables_dir))
    c5 = cluster.audit_orthogonality(C5, _rows_from(C5, tables_dir))
    pairs = {(a, b): ip for a, b, ip in c5.non_orthogonal_pairs}
    flagged = all(
        abs(abs(pairs.get(("00010", other), 0)) - 0.5) <= TOL for other in ("00011", "00110")
    )
    block_only = all("00010" in (a, b) for a, b in pairs)
    repair_ok = [(r.label, r.ket, r.new_sign) for r in c5.suggested_repairs] == [("00010", "11000", 1)]
    out = [
        Check(g, "C4 printed rows orthonormal", c4.ok, f"{len(c4.non_orthogonal_pairs)} defect(s)"),
        Check(g, "C5 row 00010 flagged against 00011 and 00110 at 1/2", flagged and block_only,
              f"{len(pairs)} defect(s)"),
        Check(g, "C5 unique repair is +|11000> in row 00010", repair_ok),
    ]
    for fam in (C4, C5):
        rows = cluster.table_rows(fam, repaired=True)
        m = np.array([rows[lab].state().amps for lab in fam.labels])
        gram = m.conj() @ m.T
        dev = float(np.max(np.abs(gram - np.eye(fam.n_rows))))
        rank = int(np.linalg.matrix_rank(m, tol=1e-8))
        out.append(Check(g, f"repaired {fam} Gram = identity", dev <= TOL, f"max dev {dev:.2e}"))
        out.append(Check(g, f"repaired {fam} spans the space", rank == fam.n_rows, f"rank {rank}"))
    return out


def generator_checks() -> list[Check]:
    g = "generators"
    out = []
    for fam in (C4, C5):
        outputs = [cluster.generate(fam, bits) for bits in fam.labels]
        dev = max(abs(inner_product(a, b)) for a, b in itertools.combinations(outputs, 2))
        out.append(Check(g, f"{fam} outputs mutually orthogonal", dev < TOL, f"max |<a|b>| {dev:.2e}"))
        try:
            mapping = cluster.input_to_row_map(fam)
            out.append(Check(g, f"{fam} input->row map is a bijection", True, f"{len(mapping)} rows"))
        except ContractViolation as exc:
            out.append(Check(g, f"{fam} input->row map is a bijection", False, str(exc)))
    formula = cluster.product_formula_state(4)
    f = fidelity_up_to_phase(cluster.generate(C4, "0000"), formula)
    out.append(Check(g, "C4 |0000> output equals the product-formula state", abs(f - 1) <= TOL,
                     f"fidelity {f:.12f}"))
    lu = gates.Circuit.build(4, [gates.named_gate("Z", q) for q in (2, 3, 4)],
                             gates.named_gate("H", 1), gates.named_gate("H", 4))
    f_lu = fidelity_up_to_phase(cluster.generate(C4, "0000"), gates.run_circuit(lu, formula))
    out.append(Check(g, "C4 |0000> output equals H1 H4 Z2 Z3 Z4 (product-formula state)",
                     abs(f_lu - 1) <= TOL, f"fidelity {f_lu:.12f}"))
    return out


def ndd_checks(rng) -> list[Check]:
    g = "ndd"
    out = []
    for fam in (C4, C5):
        rows = cluster.table_rows(fam, repaired=True)
        determ = nondestr = idem = disent = True
        labels = set()
        for lab in fam.labels:
            psi = rows[lab].state()
            branches = ndd.branch_ndd(psi, fam)
            ok = len(branches) == 1 and branches[0].label == lab and abs(branches[0].probability - 1) <= TOL
            determ &= ok
            labels.add(branches[0].label)
            nondestr &= abs(fidelity_up_to_phase(branches[0].post_state, psi) - 1) <= TOL
            again = ndd.branch_ndd(branches[0].post_state, fam)
            idem &= len(again) == 1 and again[0].label == lab and \
                abs(fidelity_up_to_phase(again[0].post_state, branches[0].post_state) - 1) <= TOL
            disent &= abs(ndd.ancilla_residue(psi, fam, lab) - 1) <= TOL
        out += [
            Check(g, f"{fam} every row yields its own label", determ and len(labels) == fam.n_rows),
            Check(g, f"{fam} row states left undisturbed", nondestr),
            Check(g, f"{fam} repeated NDD is idempotent", idem),
            Check(g, f"{fam} ancillas disentangled after measurement", disent),
        ]
        born_dev = 0.0
        for _ in range(10):
            k = int(rng.integers(2, 5))
            chosen = [fam.labels[i] for i in rng.choice(fam.n_rows, size=k, replace=False)]
            coeffs = rng.normal(size=k) + 1j * rng.normal(size=k)
            coeffs /= np.linalg.norm(coeffs)
            psi = StateVector.from_amplitudes(sum(c * rows[lab].state().amps for c, lab in zip(coeffs, chosen)))
            expected = {lab: abs(c) ** 2 for c, lab in zip(coeffs, chosen)}
            got = {o.label: o.probability for o in ndd.branch_ndd(psi, fam)}
            keys = set(expected) | set(got)
            born_dev = max(born_dev, max(abs(expected.get(x, 0) - got.get(x, 0)) for x in keys))
        out.append(Check(g, f"{fam} Born rule on row superpositions", born_dev <= TOL, f"max dev {born_dev:.2e}"))
    try:
        ndd.build_ndd_circuit(C5, repaired=False)
        out.append(Check(g, "verbatim C5 NDD rejected", False))
    except ConfigurationError:
        out.append(Check(g, "verbatim C5 NDD rejected", True))
    return out


def dense_coding_checks(rng) -> list[Check]:
    g = "dense-coding"
    out = []
    for qubits in ((1, 2), (1, 3)):
        try:
            labels = protocols.encoding_labels(qubits)
            distinct = len(set(labels.values()))
            out.append(Check(g, f"16 distinct labels from encodings on qubits {qubits}",
                             distinct == 16, f"{distinct} distinct"))
        except ContractViolation as exc:
            out.append(Check(g, f"16 distinct labels from encodings on qubits {qubits}", False, str(exc)))
    messages = ["".join(rng.choice(["0", "1"], size=4)) for _ in range(100)]
    try:
        t = protocols.dialogue_run(messages, SEED)
        errors = sum(turn.decoded != turn.message for turn in t.turns)
        worst = max(abs(turn.fidelity - 1) for turn in t.turns)
        out.append(Check(g, "100-message dialogue round-trip", errors == 0 and worst <= TOL,
                         f"{errors} decode errors, worst fidelity dev {worst:.2e}, pairing {t.pairing}"))
    except (ContractViolation, protocols.ProtocolError) as exc:
        out.append(Check(g, "100-message dialogue round-trip", False, str(exc)))
    return out


def error_checks() -> list[Check]:
    g = "errors"
    try:
        table = protocols.build_syndrome_table(C4)
    except ContractViolation as exc:
        return [Check(g, "all 13 error cases deterministic", False, str(exc))]
    sound = all(case in table.diagnose(label) for case, label in table.cases)
    return [
        Check(g, "all 13 error cases deterministic", len(table.cases) == 13),
        Check(g, "diagnosis sound", sound),
        Check(g, "distinct labels reported", True,
              f"{table.distinct_labels} distinct labels vs {protocols.CLAIMED_DISTINCT_STATES} claimed"),
    ]


def run_all(tables_dir: str | Path | None = None) -> list[Check]:
    rng = np.random.default_rng(SEED)
    return [
        *kernel_checks(rng),
        *gate_checks(rng),
        *table_checks(tables_dir),
        *audit_checks(tables_dir),
        *generator_checks(),
        *ndd_checks(rng),
        *dense_coding_checks(rng),
        *error_checks(),
    ]
