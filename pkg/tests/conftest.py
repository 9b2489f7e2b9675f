import numpy as np
import pytest
from hypothesis import strategies as st

from clusterndd.qstate import StateVector

SQRT1_2 = 1 / np.sqrt(2)


def ket_vector(terms, coeff=0.5):
    """Dense vector for a signed ket list like ["+0000", "-1111"], built with plain numpy."""
    n = len(terms[0]) - 1
    v = np.zeros(2**n, dtype=complex)
    for t in terms:
        v[int(t[1:], 2)] += coeff * (1 if t[0] == "+" else -1)
    return v


def as_state(v):
    return StateVector.from_amplitudes(v)


@st.composite
def states(draw, min_qubits=1, max_qubits=4):
    n = draw(st.integers(min_qubits, max_qubits))
    parts = st.floats(-1, 1, allow_nan=False, allow_infinity=False)
    re = draw(st.lists(parts, min_size=2**n, max_size=2**n))
    im = draw(st.lists(parts, min_size=2**n, max_size=2**n))
    v = np.array(re) + 1j * np.array(im)
    if np.linalg.norm(v) < 1e-3:
        v[0] += 1
    return StateVector.from_amplitudes(v)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
