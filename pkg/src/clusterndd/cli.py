"""Command-line interface: ``clusterndd <command> ...``.

Exit codes: 0 success, 1 verification failure or defects found, 2 usage error.
Results go to stdout, diagnostics to stderr. ``NDD_SEED`` supplies the seed
when ``--seed`` is omitted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import cluster, gates, ndd, protocols, verify
from .errors import (
    ArgumentError, ConfigurationError, ContractViolation, ProtocolError, ValidationError,
)
from .qstate import basis_state, dumps_state, fidelity_up_to_phase, format_kets, loads_state

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("NDD_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ArgumentError(f"NDD_SEED must be an integer, got {env!r}") from None


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    else:
        print(text)


def _load_state(source: str, family, repaired: bool):
    if source.startswith("row:"):
        return cluster.table_state(family, source[4:], repaired=repaired)
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise ArgumentError(f"cannot read state file {source!r}: {exc.strerror}") from None
    return loads_state(text)


def cmd_gen(args) -> int:
    state = cluster.generate(args.family, args.input)
    _emit(dumps_state(state) if args.format == "structured" else format_kets(state), args.out)
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        text = Path(args.circuit).read_text(encoding="utf-8")
    except OSError as exc:
        raise ArgumentError(f"cannot read circuit file {args.circuit!r}: {exc.strerror}") from None
    circuit = gates.parse_circuit(text)
    bits = args.input or "0" * circuit.n_qubits
    state = gates.run_circuit(circuit, basis_state(circuit.n_qubits, bits))
    _emit(dumps_state(state) if args.format == "structured" else format_kets(state), args.out)
    return EXIT_OK


def cmd_ndd(args) -> int:
    fam = cluster.get_family(args.family)
    repaired = not args.verbatim
    state = _load_state(args.state, fam, repaired)
    if args.enumerate:
        outcomes = ndd.branch_ndd(state, fam, repaired)
    else:
        outcomes = [ndd.run_ndd(state, fam, _seed(args), repaired)]
    for o in outcomes:
        fid = fidelity_up_to_phase(o.post_state, cluster.table_state(fam, o.label, repaired))
        print(f"label {o.label}  p = {o.probability:.12f}  fidelity = {fid:.12f}")
    return EXIT_OK


def cmd_audit(args) -> int:
    fam = cluster.get_family(args.family)
    rows = cluster.table_rows(fam, repaired=args.repaired)
    report = cluster.audit_orthogonality(fam, rows)
    if args.format == "structured":
        print(json.dumps(report.to_dict(), indent=1))
    else:
        print(f"mode: {'repaired' if args.repaired else 'verbatim'}")
        print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_FAIL


_PAIRINGS = {
    "13|24": protocols.DEFAULT_PAIRING,
    "12|34": protocols.CONTIGUOUS_PAIRING,
}


def cmd_dialogue(args) -> int:
    messages = [m.strip() for m in args.messages.split(",") if m.strip()]
    if not messages:
        raise ArgumentError("--messages needs at least one 4-bit message")
    transcript = protocols.dialogue_run(messages, _seed(args), _PAIRINGS[args.pairing])
    if args.format == "structured":
        print(json.dumps(transcript.to_dict(), indent=1))
        return EXIT_OK
    for k, t in enumerate(transcript.turns):
        print(f"turn {k}: {t.speaker:<5} sent {t.message}  ndd {t.label}  "
              f"decoded {t.decoded}  channel fidelity {t.fidelity:.12f}")
    return EXIT_OK


def cmd_errors(args) -> int:
    table = protocols.build_syndrome_table(args.family)
    if args.format == "structured":
        print(json.dumps(table.to_dict(), indent=1))
    else:
        print("\n".join(table.report_lines()))
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = verify.run_all(args.tables_dir)
    groups: dict[str, list] = {}
    for c in checks:
        groups.setdefault(c.group, []).append(c)
    for group, items in groups.items():
        ok = all(c.passed for c in items)
        print(f"[{'PASS' if ok else 'FAIL'}] {group}")
        for c in items:
            detail = f"  ({c.detail})" if c.detail else ""
            print(f"    {'pass' if c.passed else 'FAIL'}  {c.name}{detail}")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def _family(value: str) -> str:
    if value.upper() not in cluster.FAMILIES:
        raise argparse.ArgumentTypeError(f"unknown family {value!r} (choose c4 or c5)")
    return value.upper()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clusterndd", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a cluster-basis state from a computational input")
    g.add_argument("--family", type=_family, required=True)
    g.add_argument("--input", required=True, help="input bitstring, e.g. 0000")
    g.add_argument("--out")
    g.add_argument("--format", choices=("text", "structured"), default="text")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run a circuit file on a basis state")
    r.add_argument("--circuit", required=True)
    r.add_argument("--input", help="input bitstring (default all zeros)")
    r.add_argument("--out")
    r.add_argument("--format", choices=("text", "structured"), default="text")
    r.set_defaults(func=cmd_run)

    n = sub.add_parser("ndd", help="non-destructively discriminate a state")
    n.add_argument("--family", type=_family, required=True)
    n.add_argument("--state", required=True, help="state document path, or row:LABEL")
    how = n.add_mutually_exclusive_group()
    how.add_argument("--seed", type=int)
    how.add_argument("--enumerate", action="store_true", help="list every branch instead of sampling")
    n.add_argument("--verbatim", action="store_true", help="use the unrepaired table")
    n.set_defaults(func=cmd_ndd)

    a = sub.add_parser("audit", help="check a table for pairwise orthogonality")
    a.add_argument("--family", type=_family, required=True)
    mode = a.add_mutually_exclusive_group()
    mode.add_argument("--verbatim", dest="repaired", action="store_false")
    mode.add_argument("--repaired", dest="repaired", action="store_true")
    a.set_defaults(repaired=False)
    a.add_argument("--format", choices=("text", "structured"), default="text")
    a.set_defaults(func=cmd_audit)

    d = sub.add_parser("dialogue", help="dense-coding dialogue over a reusable |C4> channel")
    d.add_argument("--messages", required=True, help="comma-separated 4-bit messages")
    d.add_argument("--seed", type=int)
    d.add_argument("--pairing", choices=sorted(_PAIRINGS), default="13|24",
                   help="which qubits each party holds (12|34 cannot carry 4 bits)")
    d.add_argument("--format", choices=("text", "structured"), default="text")
    d.set_defaults(func=cmd_dialogue)

    e = sub.add_parser("errors", help="single-qubit error syndromes and collisions")
    e.add_argument("--family", type=_family, default="C4")
    e.add_argument("--format", choices=("text", "structured"), default="text")
    e.set_defaults(func=cmd_errors)

    v = sub.add_parser("verify", help="run every invariant check")
    v.add_argument("--tables-dir", help="audit table files from this directory instead")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ArgumentError, ConfigurationError, ValidationError) as exc:
        print(f"clusterndd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ContractViolation, ProtocolError) as exc:
        print(f"clusterndd {args.command}: failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
