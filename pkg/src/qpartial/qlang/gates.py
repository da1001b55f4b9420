"""Gate library and embedding of small unitaries into the full register.

Qubit 0 is the leftmost tensor factor (most significant bit of a basis
index). ``embed_operator`` places a 2^k x 2^k block on arbitrary,
possibly non-adjacent target qubits; ``denote_unitary`` additionally
certifies unitarity.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np

from .. import linalg
from ..errors import DimensionMismatchError, NonUnitaryError

_SQRT2 = math.sqrt(2.0)

GATES: dict[str, np.ndarray] = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / _SQRT2,
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
}

KET_VECTORS: dict[str, np.ndarray] = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / _SQRT2,
    "-": np.array([1, -1], dtype=complex) / _SQRT2,
}

UNITARY_TOL = 1e-10


def gate_arity(name: str) -> int:
    return int(math.log2(GATES[name].shape[0]))


def embed_operator(block, targets, total_qubits: int) -> np.ndarray:
    """Place a 2^k x 2^k operator on the given k target qubits.

    Works for any matrix (projectors included), not only unitaries.
    """
    block = linalg.as_matrix(block)
    k = len(targets)
    if block.shape[0] != 2**k:
        raise DimensionMismatchError(
            f"operator of dimension {block.shape[0]} does not act on {k} qubit(s)"
        )
    if len(set(targets)) != k:
        raise ValueError(f"duplicate target qubits: {targets}")
    for q in targets:
        if not 0 <= q < total_qubits:
            raise ValueError(f"target qubit {q} out of range for {total_qubits} qubit(s)")
    dim = 2**total_qubits
    rest = [q for q in range(total_qubits) if q not in targets]
    full = np.zeros((dim, dim), dtype=complex)
    for rest_bits in product((0, 1), repeat=len(rest)):
        base = 0
        for q, bit in zip(rest, rest_bits):
            base |= bit << (total_qubits - 1 - q)
        idx = []
        for sub in range(2**k):
            i = base
            for pos, q in enumerate(targets):
                bit = (sub >> (k - 1 - pos)) & 1
                i |= bit << (total_qubits - 1 - q)
            idx.append(i)
        full[np.ix_(idx, idx)] = block
    return full


def denote_unitary(gate, targets, total_qubits: int) -> np.ndarray:
    """Full-dimension unitary for a gate name or inline matrix."""
    if isinstance(gate, str):
        name = gate.upper()
        if name not in GATES:
            raise ValueError(f"unknown gate {gate!r}")
        block = GATES[name]
    else:
        block = linalg.as_matrix(gate)
    dev = linalg.max_norm(block.conj().T @ block - np.eye(block.shape[0]))
    if dev > UNITARY_TOL:
        raise NonUnitaryError(f"gate deviates from unitary by {dev:.3e}")
    return embed_operator(block, tuple(targets), total_qubits)


def ket_guard_projection(ket: str, qubit: int, total_qubits: int) -> np.ndarray:
    """Projection onto the event 'this qubit is in the given basis ket'."""
    v = KET_VECTORS[ket]
    return embed_operator(np.outer(v, v.conj()), (qubit,), total_qubits)
