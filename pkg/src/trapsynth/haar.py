"""Haar-random unitaries and sphere-uniform pure states.

Randomness comes from numpy's PCG64 bit generator seeded through
``SeedSequence(entropy=seed, spawn_key=(purpose, stream))``; Gaussians are
numpy's ``standard_normal``. A complex Gaussian entry is ``(a + i b)/sqrt(2)``
with ``a`` and ``b`` drawn consecutively from one ``standard_normal`` call.
"""

from __future__ import annotations

import numpy as np

from .linalg import MAX_DENSE_QUBITS, MAX_QUBITS, DimensionError

_PURPOSE_UNITARY = 11
_PURPOSE_STATE = 12


def sampler_rng(seed: int, stream: int = 0, purpose: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(purpose, int(stream)))
    return np.random.Generator(np.random.PCG64(ss))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    z = rng.standard_normal(tuple(shape) + (2,))
    return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)


def haar_from_ginibre(z: np.ndarray) -> np.ndarray:
    """QR of a Ginibre matrix with the phases of ``diag(R)`` folded back into ``Q``."""
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_unitary(n_qubits: int, seed: int, stream: int = 0) -> np.ndarray:
    if not 0 <= n_qubits <= MAX_DENSE_QUBITS:
        raise DimensionError(f"{n_qubits} qubits is outside the dense range")
    dim = 1 << n_qubits
    rng = sampler_rng(seed, stream, _PURPOSE_UNITARY)
    return haar_from_ginibre(complex_gaussian(rng, (dim, dim)))


def haar_state(n_qubits: int, seed: int, stream: int = 0) -> np.ndarray:
    if not 0 <= n_qubits <= MAX_QUBITS:
        raise DimensionError(f"{n_qubits} qubits is outside the simulation range")
    rng = sampler_rng(seed, stream, _PURPOSE_STATE)
    v = complex_gaussian(rng, (1 << n_qubits,))
    return v / np.linalg.norm(v)
