"""Synthesis cost and its exact gradient.

For a selected set of columns ``j`` with targets ``u_j`` the cost is::

    g(x) = mean_j || f(x) e_j - u_j ||^2 = mean_j 2 (1 - Re <e_j| f(x)^dagger |u_j>)

A state target is the single column ``j = 0``. The gradient needs three
circuit passes: ``f(x)^dagger`` on the targets, then one forward sweep that
advances both the basis states and the pulled-back targets gate by gate,
reading each partial derivative off the generator at its position.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass

import numpy as np

from . import kernels
from .ansatz import Mode, Topology, check_params
from .gates import ms_diagonal
from .linalg import DimensionError, as_matrix, as_state, n_qubits_for, unitarity_residual, vec_norm


class TargetKind(enum.Enum):
    STATE = "state"
    COLUMNS = "columns"
    UNITARY = "unitary"


@dataclass(frozen=True)
class SynthesisTarget:
    """What the circuit should reproduce.

    ``columns`` holds the target vectors row-wise, shape ``(m, 2**n)``;
    ``selection[i]`` is the basis index that ``columns[i]`` is the image of.
    """

    n_qubits: int
    kind: TargetKind
    selection: tuple[int, ...]
    columns: np.ndarray

    @classmethod
    def state(cls, psi, tol: float = 1e-12) -> "SynthesisTarget":
        psi = as_state(psi, normalized=True, tol=tol)
        return cls(n_qubits_for(psi.size), TargetKind.STATE, (0,), _frozen(psi[None, :]))

    @classmethod
    def unitary(cls, u, tol: float = 1e-10) -> "SynthesisTarget":
        u = as_matrix(u)
        n = n_qubits_for(u.shape[0])
        res = unitarity_residual(u)
        if res > tol:
            raise ValueError(f"target is not unitary (residual {res:.3e})")
        return cls(n, TargetKind.UNITARY, tuple(range(u.shape[0])), _frozen(u.T))

    @classmethod
    def from_columns(cls, selection, columns, tol: float = 1e-10) -> "SynthesisTarget":
        cols = np.array(columns, dtype=np.complex128)
        if cols.ndim != 2:
            raise DimensionError("columns must be a 2-D array, one column vector per row")
        n = n_qubits_for(cols.shape[1])
        sel = tuple(int(s) for s in selection)
        if len(sel) != cols.shape[0]:
            raise DimensionError("one selection index per column is required")
        if len(set(sel)) != len(sel) or any(not 0 <= s < cols.shape[1] for s in sel):
            raise ValueError("selection indices must be distinct and within range")
        gram = cols.conj() @ cols.T
        res = float(np.max(np.abs(gram - np.eye(len(sel)))))
        if res > tol:
            raise ValueError(f"columns are not orthonormal (residual {res:.3e})")
        return cls(n, TargetKind.COLUMNS, sel, _frozen(cols))

    @classmethod
    def unitary_columns(cls, u, selection, tol: float = 1e-10) -> "SynthesisTarget":
        u = as_matrix(u)
        sel = [int(s) for s in selection]
        return cls.from_columns(sel, u[:, sel].T, tol=tol)

    @property
    def mode(self) -> Mode:
        return Mode.STATE if self.kind is TargetKind.STATE else Mode.OPERATOR

    def basis_rows(self) -> np.ndarray:
        out = np.zeros_like(self.columns)
        out[np.arange(len(self.selection)), list(self.selection)] = 1.0
        return out


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.complex128).copy()
    a.setflags(write=False)
    return a


@dataclass
class GradientResult:
    cost: float
    gradient: np.ndarray


class Objective:
    """Cost/gradient evaluator bound to one topology and one target.

    Scratch state buffers are allocated once per calling thread and reused,
    so one instance can be shared by concurrent restarts.
    """

    def __init__(self, topology: Topology, target: SynthesisTarget, backend: str | None = None):
        if topology.n_qubits != target.n_qubits:
            raise DimensionError(
                f"topology has {topology.n_qubits} qubits, target has {target.n_qubits}")
        self.topology = topology
        self.target = target
        self.backend = kernels.get_backend(backend)
        self._bra0 = _frozen(target.basis_rows())
        self._ket0 = target.columns
        self._diag = ms_diagonal(topology.n_qubits)
        self._local = threading.local()
        self.n_evals = 0

    def _scratch(self):
        s = getattr(self._local, "bufs", None)
        if s is None:
            shape = self._ket0.shape
            s = (np.empty(shape, np.complex128), np.empty(shape, np.complex128))
            self._local.bufs = s
        return s

    def _run(self, x, want_grad):
        x = check_params(self.topology, x)
        bra, ket = self._scratch()
        grad = np.zeros(self.topology.param_count)
        t = self.topology
        c = self.backend.evaluate(t.n_qubits, t.ops, t.slots, x, self._bra0, self._ket0,
                                  bra, ket, self._diag, grad, want_grad)
        self.n_evals += 1
        return float(c), grad

    def cost(self, x) -> float:
        return self._run(x, False)[0]

    def cost_and_gradient(self, x) -> GradientResult:
        c, g = self._run(x, True)
        return GradientResult(c, g)

    def __call__(self, x) -> GradientResult:
        return self.cost_and_gradient(x)


def cost(t: Topology, x, target: SynthesisTarget, backend: str | None = None) -> float:
    return Objective(t, target, backend).cost(x)


def cost_and_gradient(t: Topology, x, target: SynthesisTarget,
                      backend: str | None = None) -> GradientResult:
    return Objective(t, target, backend).cost_and_gradient(x)


def simulate(t: Topology, x, psi, adjoint: bool = False, backend: str | None = None) -> np.ndarray:
    """Apply ``f(x)`` (or ``f(x)^dagger``) to a state, or to each row of a 2-D array."""
    x = check_params(t, x)
    psi = np.array(psi, dtype=np.complex128)
    squeeze = psi.ndim == 1
    states = np.ascontiguousarray(psi[None, :] if squeeze else psi)
    if states.shape[-1] != 1 << t.n_qubits:
        raise DimensionError(f"state length {states.shape[-1]} does not match {t.n_qubits} qubits")
    k = kernels.get_backend(backend)
    k.simulate(t.n_qubits, t.ops, t.slots, x, states, ms_diagonal(t.n_qubits), adjoint)
    return states[0] if squeeze else states


def residual(t: Topology, x, target: SynthesisTarget) -> float:
    """Largest ``|| f(x) e_j - u_j ||`` over the selected columns."""
    out = simulate(t, x, target.basis_rows())
    return max(vec_norm(a - b) for a, b in zip(out, target.columns))
