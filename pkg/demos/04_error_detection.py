"""
Single-qubit error detection
============================

Inject bit and phase flips into |C4>, read the label, and look up candidates.
"""

from clusterndd import cluster, ndd, protocols
from clusterndd.cluster import C4, C5

table = protocols.build_syndrome_table(C4)
for line in table.report_lines():
    print(line)

###############################################################################
# Phase flips on qubits 1 and 2 give the same label, so the lookup returns
# both candidates.

psi = protocols.inject_error(cluster.canonical_state(C4), 2, "phase-flip")
label = ndd.run_ndd(psi, C4, seed=0).label
print(label, protocols.diagnose(table, label))

###############################################################################
# The five-qubit family separates more of the cases

t5 = protocols.build_syndrome_table(C5)
print(len(t5.cases), "cases,", t5.distinct_labels, "labels")
