"""Dense complex linear algebra helpers.

States are 1-D ``complex128`` arrays of length ``2**n``; matrices are 2-D
row-major ``complex128`` arrays. Qubit 0 is the most significant bit of a
basis index, so ``kron(A, B)`` puts ``A`` on qubit 0.
"""

from __future__ import annotations

import numpy as np

MAX_QUBITS = 16
"""Largest register the simulator accepts."""

MAX_DENSE_QUBITS = 10
"""Largest register for which dense ``2**n x 2**n`` matrices are built."""


class DimensionError(ValueError):
    """Operand shapes are inconsistent or too large."""


def _finite_complex(a, what: str) -> np.ndarray:
    arr = np.asarray(a, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains NaN or Inf")
    return arr


def n_qubits_for(dim: int) -> int:
    """Return ``n`` with ``2**n == dim``; raise if ``dim`` is not a power of two."""
    if dim < 1 or dim & (dim - 1):
        raise DimensionError(f"dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def as_state(v, normalized: bool = False, tol: float = 1e-12) -> np.ndarray:
    """Validate ``v`` as a state vector and return it as a complex array."""
    arr = _finite_complex(v, "state")
    if arr.ndim != 1:
        raise DimensionError(f"state must be 1-D, got shape {arr.shape}")
    n = n_qubits_for(arr.size)
    if n > MAX_QUBITS:
        raise DimensionError(f"{n} qubits exceeds the limit of {MAX_QUBITS}")
    if normalized and abs(vec_norm(arr) - 1.0) > tol:
        raise ValueError(f"state is not normalized (norm {vec_norm(arr):.3e})")
    return arr


def as_matrix(m) -> np.ndarray:
    arr = _finite_complex(m, "matrix")
    if arr.ndim != 2:
        raise DimensionError(f"matrix must be 2-D, got shape {arr.shape}")
    return arr


def basis_state(n: int, index: int = 0) -> np.ndarray:
    v = np.zeros(1 << n, dtype=np.complex128)
    v[index] = 1.0
    return v


def kron(a, b) -> np.ndarray:
    """Kronecker product, ``a`` acting on the more significant qubits."""
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > 1 << MAX_DENSE_QUBITS:
        raise DimensionError(f"kron result {rows}x{cols} exceeds the dense limit")
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(rows, cols)


def kron_all(mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = kron(out, m)
    return out


def dagger(m) -> np.ndarray:
    return np.conj(as_matrix(m)).T.copy()


def vec_norm(v) -> float:
    v = np.asarray(v)
    return float(np.sqrt(np.real(np.vdot(v, v))))


def inner(a, b) -> complex:
    """``<a|b>``, conjugate-linear in the first argument."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def unitarity_residual(m) -> float:
    """Max-abs entry of ``M^dagger M - I``."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"unitary must be square, got shape {m.shape}")
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
