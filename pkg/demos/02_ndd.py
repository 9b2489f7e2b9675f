"""
Non-destructive discrimination
==============================

Read out which basis row a register holds by measuring ancillas only.
"""

import numpy as np

from clusterndd import cluster, ndd
from clusterndd.cluster import C4, C5
from clusterndd.gates import format_circuit

# each label bit is the parity of one Pauli observable
for fam in (C4, C5):
    print(fam, [str(o) for o in ndd.label_observables(fam)])

circ = ndd.build_ndd_circuit(C4)
print(format_circuit(circ.circuit))

###############################################################################
# A single row is read without disturbance

psi = cluster.table_state(C4, "0110")
out = ndd.run_ndd(psi, C4, seed=1)
print(out.label, out.probability)

###############################################################################
# Superpositions collapse by the Born rule
# ----------------------------------------
# 0.6|row 0011> + 0.8|row 1100> gives 0011 with p = 0.36 and 1100 with 0.64.

a, b = cluster.table_state(C4, "0011"), cluster.table_state(C4, "1100")
from clusterndd.qstate import StateVector
mix = StateVector(4, 0.6 * a.amps + 0.8 * b.amps)
for o in ndd.branch_ndd(mix, C4):
    print(o.label, round(o.probability, 12))

counts = {}
for seed in range(2000):
    lab = ndd.run_ndd(mix, C4, seed).label
    counts[lab] = counts.get(lab, 0) + 1
print(counts)

###############################################################################
# C5 works on the repaired table

for lab in ("00010", "11111"):
    (o,) = ndd.branch_ndd(cluster.table_state(C5, lab, repaired=True), C5)
    print(lab, "->", o.label, np.round(o.probability, 12))
