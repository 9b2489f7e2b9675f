"""
Dense coding and quantum dialogue
=================================

Two parties share canonical |C4> and take turns sending four classical bits
through two Pauli operations, read back with the NDD circuit.
"""

from clusterndd import protocols

###############################################################################
# Which two qubits can carry four bits?
# -------------------------------------
# Z1Z2 and Z3Z4 stabilize the state, so a pair of adjacent qubits only reaches
# eight distinct states. Interleaved pairs reach all sixteen.

for qubits in ((1, 2), (3, 4), (1, 3), (2, 4)):
    labels = protocols.encoding_labels(qubits)
    print(qubits, len(set(labels.values())), "distinct labels")

book = protocols.build_codebook((1, 3))
for e in book.entries[:4]:
    print(e.message, e.word, "->", e.label)

###############################################################################
# A dialogue over one reusable channel

t = protocols.dialogue_run(["1010", "0110", "1111", "0001"], seed=3)
for turn in t.turns:
    print(turn.speaker, turn.message, "->", turn.decoded, round(turn.fidelity, 12))

###############################################################################
# Asking for the first-two / last-two split raises instead of decoding wrongly

from clusterndd.errors import ContractViolation

try:
    protocols.dialogue_run(["0000"], seed=0, pairing=protocols.CONTIGUOUS_PAIRING)
except ContractViolation as exc:
    print("refused:", exc)
