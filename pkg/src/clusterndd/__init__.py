"""Statevector simulation of four- and five-qubit cluster bases and their
non-destructive discrimination with ancilla measurements."""

from .cluster import (
    C4, C5, AuditReport, ClusterFamily, TableRow, audit_orthogonality, canonical_state,
    generate, get_family, input_to_row_map, load_table, product_formula_state,
    reference_generator, table_rows, table_state,
)
from .errors import (
    ArgumentError, CapacityError, ConfigurationError, ContractViolation, ProtocolError,
    TableIntegrityError, ValidationError,
)
from .gates import (
    Circuit, GateApplication, cnot, cz, named_gate, parse_circuit, format_circuit,
    run_circuit, swap, verify_circuit_unitary,
)
from .ndd import NddCircuit, NddOutcome, branch_ndd, build_ndd_circuit, run_ndd
from .protocols import (
    Codebook, DialogueTranscript, PauliWord, SyndromeTable, apply_pauli, build_codebook,
    build_syndrome_table, diagnose, dialogue_run, inject_error,
)
from .qstate import (
    MeasurementBranch, StateVector, apply_gate, basis_state, branch_enumerate,
    fidelity_up_to_phase, format_kets, inner_product, measure,
)

__version__ = "0.1.0"
