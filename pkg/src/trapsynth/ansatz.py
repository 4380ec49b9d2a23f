"""Layered trapped-ion circuit topologies and entangling-gate lower bounds.

Circuit order (time runs left to right) for ``n`` qubits and ``k`` MS gates::

    k x [Rz layer, Rx(+pi/2), Rz layer, Rx(-pi/2), MS]
        [Rz layer, Rx(+pi/2), Rz layer, Rx(-pi/2)]
        Rz layer
        global phase

State-preparation mode drops the very first Rz layer, which only adds a
phase when acting on ``|0...0>``. Parameter slots are numbered left to
right in circuit order; within an Rz layer, slot ``s + q`` drives qubit ``q``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .gates import GateKind, GateOp, gate_dense
from .linalg import MAX_QUBITS, DimensionError

LAYOUT_VERSION = "trapsynth-layout/1"


class Mode(enum.Enum):
    OPERATOR = "operator"
    STATE = "state"

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, cls):
            return value
        aliases = {"operator": cls.OPERATOR, "op": cls.OPERATOR, "unitary": cls.OPERATOR,
                   "state": cls.STATE, "state-preparation": cls.STATE, "prep": cls.STATE}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"unknown mode {value!r}") from None


@dataclass(frozen=True)
class Topology:
    n_qubits: int
    ms_count: int
    mode: Mode
    gates: tuple[GateOp, ...] = field(repr=False)
    param_count: int
    ops: np.ndarray = field(repr=False, compare=False)
    slots: np.ndarray = field(repr=False, compare=False)

    @property
    def dof(self) -> int:
        return dof_count(self)

    def descriptor(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "ms_count": self.ms_count,
            "mode": self.mode.value,
            "param_count": self.param_count,
            "layout": LAYOUT_VERSION,
        }

    @classmethod
    def from_descriptor(cls, d: dict) -> "Topology":
        if d.get("layout") != LAYOUT_VERSION:
            raise ValueError(f"unsupported parameter layout {d.get('layout')!r}")
        t = build_topology(int(d["n_qubits"]), int(d["ms_count"]), Mode.parse(d["mode"]))
        if "param_count" in d and int(d["param_count"]) != t.param_count:
            raise ValueError("descriptor param_count disagrees with the layout")
        return t


def build_topology(n: int, k: int, mode=Mode.OPERATOR) -> Topology:
    mode = Mode.parse(mode)
    if n < 1:
        raise ValueError("need at least one qubit")
    if n > MAX_QUBITS:
        raise DimensionError(f"{n} qubits exceeds the simulation limit of {MAX_QUBITS}")
    if k < 0:
        raise ValueError("MS count must be nonnegative")

    gates: list[GateOp] = []
    ops: list[int] = []
    slots: list[int] = []
    nxt = 0

    def rz_layer():
        nonlocal nxt
        gates.extend(GateOp(GateKind.LOCAL_RZ, n, slot=nxt + q, qubit=q) for q in range(n))
        ops.append(kernels.RZ_LAYER)
        slots.append(nxt)
        nxt += n

    def rx(sign):
        gates.append(GateOp(GateKind.GLOBAL_RX, n, sign=sign))
        ops.append(kernels.RX_PLUS if sign > 0 else kernels.RX_MINUS)
        slots.append(-1)

    def single(kind, opcode):
        nonlocal nxt
        gates.append(GateOp(kind, n, slot=nxt))
        ops.append(opcode)
        slots.append(nxt)
        nxt += 1

    for block in range(k + 1):
        if block > 0 or mode is Mode.OPERATOR:
            rz_layer()
        rx(+1)
        rz_layer()
        rx(-1)
        if block < k:
            single(GateKind.MS, kernels.MS)
    rz_layer()
    single(GateKind.GLOBAL_PHASE, kernels.PHASE)

    ops_arr = np.array(ops, dtype=np.int64)
    slots_arr = np.array(slots, dtype=np.int64)
    ops_arr.setflags(write=False)
    slots_arr.setflags(write=False)
    return Topology(n, k, mode, tuple(gates), nxt, ops_arr, slots_arr)


def dof_count(t: Topology) -> int:
    """Degrees of freedom; the explicit phase slot is not counted in state mode."""
    n, k = t.n_qubits, t.ms_count
    if t.mode is Mode.OPERATOR:
        return (2 * n + 1) * k + 3 * n + 1
    return (2 * n + 1) * k + 2 * n


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def lower_bound_operator(n: int) -> int:
    """Fewest MS gates with which an ``n``-qubit topology can be universal for unitaries."""
    if n < 1:
        raise ValueError("need at least one qubit")
    return max(0, _ceil_div(4 ** n - 3 * n - 1, 2 * n + 1))


def lower_bound_state(n: int) -> int:
    """Fewest MS gates for universal preparation of ``n``-qubit states from ``|0...0>``."""
    if n < 1:
        raise ValueError("need at least one qubit")
    return max(0, _ceil_div(2 ** (n + 1) - 2 * n - 2, 2 * n + 1))


def lower_bound(n: int, mode) -> int:
    return lower_bound_operator(n) if Mode.parse(mode) is Mode.OPERATOR else lower_bound_state(n)


def tradeoff_count(bound: int) -> int:
    """MS count with roughly 10% extra gates, always at least one more."""
    return max(bound + 1, math.ceil(1.1 * bound))


def check_params(t: Topology, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (t.param_count,):
        raise ValueError(f"expected {t.param_count} parameters, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("parameters must be finite")
    return x


def instantiate(t: Topology, x) -> list[tuple[GateOp, float]]:
    """Pair each gate with its concrete angle."""
    x = check_params(t, x)
    return [(g, g.angle(x)) for g in t.gates]


def circuit_dense(t: Topology, x) -> np.ndarray:
    """Dense unitary of the whole circuit, multiplied gate by gate."""
    x = check_params(t, x)
    u = np.eye(1 << t.n_qubits, dtype=np.complex128)
    for g in t.gates:
        u = gate_dense(g, x) @ u
    return u


def format_circuit(t: Topology, x) -> str:
    """Textual gate list, one gate per line."""
    lines = []
    for g, theta in instantiate(t, x):
        if g.kind is GateKind.LOCAL_RZ:
            lines.append(f"RZ q{g.qubit} {theta!r}")
        elif g.kind is GateKind.GLOBAL_RX:
            lines.append(f"RX_ALL {'+' if g.sign > 0 else '-'}pi/2")
        elif g.kind is GateKind.MS:
            lines.append(f"MS {theta!r}")
        else:
            lines.append(f"PHASE {theta!r}")
    return "\n".join(lines)
