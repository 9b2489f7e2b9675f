"""
Four- and five-qubit cluster bases
==================================

Load the embedded tables, audit them for orthogonality, and rebuild every
row from a short Clifford circuit.
"""

from clusterndd import cluster
from clusterndd.cluster import C4, C5
from clusterndd.qstate import format_kets

# the canonical four-qubit state, straight from the table
print(format_kets(cluster.table_state(C4, "0000")))

# the same state from the reference generator
print(format_kets(cluster.generate(C4, "0000")))

###############################################################################
# Auditing the tables
# -------------------
# C4 is clean. C5 as shipped has one bad sign in row 00010; the audit finds
# the only single-sign flip that fixes it.

for fam in (C4, C5):
    print(f"--- {fam}")
    for line in cluster.audit_orthogonality(fam).lines():
        print(line)

print(format_kets(cluster.table_state(C5, "00010")))
print(format_kets(cluster.table_state(C5, "00010", repaired=True)))

###############################################################################
# Generator inputs and table rows
# -------------------------------
# The generator maps computational inputs onto rows bijectively, but not
# label-for-label.

for b, row in cluster.input_to_row_map(C4).items():
    print(b, "->", row)

###############################################################################
# The product formula
# -------------------
# Expanding the textbook product formula literally gives a state that is
# locally equivalent to row 0000, not equal to it.

from clusterndd.gates import Circuit, named_gate, run_circuit
from clusterndd.qstate import fidelity_up_to_phase

literal = cluster.product_formula_state(4)
print("literal:", format_kets(literal))
print("fidelity with row 0000:", round(fidelity_up_to_phase(literal, cluster.table_state(C4, "0000")), 12))
lu = Circuit.build(4, [named_gate("Z", q) for q in (2, 3, 4)], named_gate("H", 1), named_gate("H", 4))
print("after H1 H4 Z2 Z3 Z4:", round(fidelity_up_to_phase(run_circuit(lu, literal), cluster.table_state(C4, "0000")), 12))
