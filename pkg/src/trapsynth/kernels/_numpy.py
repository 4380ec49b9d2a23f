"""Pure-numpy kernels. Same signatures as the numba backend.

``states`` always has shape ``(m, 2**n)``: one state per row.
"""

import numpy as np

from .opcodes import MS, PHASE, RX_MINUS, RX_PLUS, RZ_LAYER

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def _bit_signs(n):
    # row q: -1 where qubit q is |0>, +1 where it is |1>
    idx = np.arange(1 << n)
    shifts = np.arange(n - 1, -1, -1)[:, None]
    return 2.0 * ((idx[None, :] >> shifts) & 1) - 1.0


def rz_layer(states, n, angles, sign):
    phase = np.exp(0.5j * sign * (angles @ _bit_signs(n)))
    states *= phase


def _butterfly(states, n, a, b, c, d):
    m = states.shape[0]
    for q in range(n):
        stride = 1 << (n - 1 - q)
        v = states.reshape(m, -1, 2, stride)
        lo = v[:, :, 0, :].copy()
        hi = v[:, :, 1, :]
        v[:, :, 0, :] = a * lo + b * hi
        v[:, :, 1, :] = c * lo + d * hi


def rx_global(states, n, sign):
    off = -1j * sign * _INV_SQRT2
    _butterfly(states, n, _INV_SQRT2, off, off, _INV_SQRT2)


def hadamard_all(states, n):
    _butterfly(states, n, _INV_SQRT2, _INV_SQRT2, _INV_SQRT2, -_INV_SQRT2)


def ms(states, n, theta, diag):
    hadamard_all(states, n)
    states *= np.exp(-1j * theta * diag)
    hadamard_all(states, n)


def phase(states, theta):
    states *= np.exp(1j * theta)


def _apply(op, slot, n, x, states, diag, sign):
    if op == RZ_LAYER:
        rz_layer(states, n, x[slot:slot + n], sign)
    elif op == RX_PLUS:
        rx_global(states, n, sign)
    elif op == RX_MINUS:
        rx_global(states, n, -sign)
    elif op == MS:
        ms(states, n, sign * x[slot], diag)
    elif op == PHASE:
        phase(states, sign * x[slot])


def simulate(n, ops, slots, x, states, diag, adjoint):
    if adjoint:
        for i in range(ops.shape[0] - 1, -1, -1):
            _apply(ops[i], slots[i], n, x, states, diag, -1.0)
    else:
        for i in range(ops.shape[0]):
            _apply(ops[i], slots[i], n, x, states, diag, 1.0)


def evaluate(n, ops, slots, x, bra0, ket0, bra, ket, diag, grad, want_grad):
    m = ket0.shape[0]
    ket[...] = ket0
    simulate(n, ops, slots, x, ket, diag, True)
    overlap = np.vdot(bra0, ket).real
    cost = 2.0 * (1.0 - overlap / m)
    if not want_grad:
        return cost

    bra[...] = bra0
    grad[:] = 0.0
    for i in range(ops.shape[0]):
        op = ops[i]
        slot = slots[i]
        if op == RZ_LAYER:
            w = np.sum(np.conj(bra) * ket, axis=0)
            # sweep generator is +Z_q/2; Z eigenvalue is -bit sign
            z = -(_bit_signs(n) @ w)
            grad[slot:slot + n] = z.imag / m
        elif op == MS:
            hadamard_all(bra, n)
            hadamard_all(ket, n)
            val = np.sum(np.conj(bra) * ket * diag)
            grad[slot] = 2.0 * val.imag / m
            d = np.exp(-1j * x[slot] * diag)
            bra *= d
            ket *= d
            hadamard_all(bra, n)
            hadamard_all(ket, n)
            continue
        elif op == PHASE:
            grad[slot] = -2.0 * np.vdot(bra, ket).imag / m
        _apply(op, slot, n, x, bra, diag, 1.0)
        _apply(op, slot, n, x, ket, diag, 1.0)
    return cost
