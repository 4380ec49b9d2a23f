"""Trapped-ion gate set: local Rz, global Rx(+-pi/2), Molmer-Sorensen, global phase.

Conventions::

    Rz(t) = diag(exp(-i t/2), exp(i t/2))        = exp(i t (-Z/2))
    Rx(t) = [[cos t/2, -i sin t/2],
             [-i sin t/2, cos t/2]]
    MS(t) = exp(-i t (sum_j X_j)^2 / 4)         = exp(i t (-(sum_j X_j)^2 / 4))
    P(t)  = exp(i t) I

Every parameterized gate is written ``exp(i t Omega)``; ``apply_generator``
applies ``Omega``. MS is diagonal in the Hadamard basis with entries
``exp(-i t (n - 2 w)^2 / 4)`` where ``w`` is the Hamming weight of the index.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from . import kernels
from .linalg import MAX_DENSE_QUBITS, DimensionError, kron_all

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


class GateKind(enum.Enum):
    LOCAL_RZ = "rz"
    GLOBAL_RX = "rx"
    MS = "ms"
    GLOBAL_PHASE = "phase"


@dataclass(frozen=True)
class GateOp:
    """One gate of a topology.

    ``slot`` indexes the parameter vector (``None`` for the fixed global Rx);
    ``qubit`` is only meaningful for ``LOCAL_RZ`` and ``sign`` only for
    ``GLOBAL_RX``, whose angle is ``sign * pi/2``.
    """

    kind: GateKind
    n_qubits: int
    slot: int | None = None
    qubit: int | None = None
    sign: int = 1

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if self.kind is GateKind.GLOBAL_RX:
            if self.slot is not None:
                raise ValueError("global Rx carries no free parameter")
            if self.sign not in (1, -1):
                raise ValueError("global Rx sign must be +1 or -1")
        elif self.slot is None or self.slot < 0:
            raise ValueError(f"{self.kind.value} gate needs a parameter slot")
        if self.kind is GateKind.LOCAL_RZ:
            if self.qubit is None or not 0 <= self.qubit < self.n_qubits:
                raise ValueError(f"qubit {self.qubit} out of range for {self.n_qubits} qubits")

    @property
    def parameterized(self) -> bool:
        return self.kind is not GateKind.GLOBAL_RX

    def angle(self, params) -> float:
        if self.kind is GateKind.GLOBAL_RX:
            return self.sign * np.pi / 2
        if self.slot >= len(params):
            raise IndexError(f"parameter slot {self.slot} out of range ({len(params)} params)")
        return float(params[self.slot])


def hamming_weight(b: int) -> int:
    if b < 0:
        raise ValueError("hamming_weight expects a nonnegative integer")
    return int(b).bit_count()


@lru_cache(maxsize=None)
def _ms_diagonal(n: int) -> np.ndarray:
    w = np.array([hamming_weight(b) for b in range(1 << n)], dtype=np.float64)
    d = (n - 2.0 * w) ** 2 / 4.0
    d.setflags(write=False)
    return d


def ms_diagonal(n: int) -> np.ndarray:
    """Eigenvalues of ``(sum_j X_j)^2 / 4`` in the Hadamard basis."""
    return _ms_diagonal(n)


def _check_state(g: GateOp, psi) -> np.ndarray:
    psi = np.array(psi, dtype=np.complex128)
    if psi.shape != (1 << g.n_qubits,):
        raise DimensionError(f"state of shape {psi.shape} does not match {g.n_qubits} qubits")
    return psi


def apply_gate(g: GateOp, params, psi, backend: str | None = None) -> np.ndarray:
    """Return ``U psi`` for the gate ``g`` instantiated with ``params``."""
    k = kernels.get_backend(backend)
    out = _check_state(g, psi)[None, :]
    n = g.n_qubits
    theta = g.angle(params)
    if g.kind is GateKind.LOCAL_RZ:
        angles = np.zeros(n)
        angles[g.qubit] = theta
        k.rz_layer(out, n, angles, 1.0)
    elif g.kind is GateKind.GLOBAL_RX:
        k.rx_global(out, n, float(g.sign))
    elif g.kind is GateKind.MS:
        k.ms(out, n, theta, ms_diagonal(n))
    else:
        k.phase(out, theta)
    return out[0]


def apply_generator(g: GateOp, psi) -> np.ndarray:
    """Return ``Omega psi`` where the gate is ``exp(i theta Omega)``."""
    if not g.parameterized:
        raise ValueError("global Rx(+-pi/2) is not parameterized and has no generator")
    psi = _check_state(g, psi)
    n = g.n_qubits
    if g.kind is GateKind.LOCAL_RZ:
        bits = (np.arange(1 << n) >> (n - 1 - g.qubit)) & 1
        return psi * (bits - 0.5)
    if g.kind is GateKind.MS:
        out = psi[None, :].copy()
        k = kernels.get_backend("numpy")
        k.hadamard_all(out, n)
        out *= -ms_diagonal(n)
        k.hadamard_all(out, n)
        return out[0]
    return psi.copy()


def sum_x(n: int) -> np.ndarray:
    """Dense ``sum_j X_j``."""
    out = np.zeros((1 << n, 1 << n), dtype=np.complex128)
    for j in range(n):
        out += kron_all([X if i == j else I2 for i in range(n)])
    return out


def gate_dense(g: GateOp, params) -> np.ndarray:
    """Dense unitary of ``g``, built independently of the kernels."""
    n = g.n_qubits
    if n > MAX_DENSE_QUBITS:
        raise DimensionError(f"{n} qubits exceeds the dense limit of {MAX_DENSE_QUBITS}")
    theta = g.angle(params)
    if g.kind is GateKind.LOCAL_RZ:
        return kron_all([rz(theta) if i == g.qubit else I2 for i in range(n)])
    if g.kind is GateKind.GLOBAL_RX:
        return kron_all([rx(theta)] * n)
    if g.kind is GateKind.MS:
        s = sum_x(n)
        return scipy.linalg.expm(-1j * theta * (s @ s) / 4)
    return np.exp(1j * theta) * np.eye(1 << n, dtype=np.complex128)
