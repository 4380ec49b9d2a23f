"""Numba kernels. Loop-level twins of ``_numpy``; every function releases the GIL."""

import numpy as np
from numba import njit

from .opcodes import MS, PHASE, RX_MINUS, RX_PLUS, RZ_LAYER

_INV_SQRT2 = 1.0 / np.sqrt(2.0)

_jit = njit(cache=True, nogil=True)


@_jit
def _layer_angle(n, angles, b):
    acc = 0.0
    for q in range(n):
        if (b >> (n - 1 - q)) & 1:
            acc += angles[q]
        else:
            acc -= angles[q]
    return acc


@_jit
def rz_layer(states, n, angles, sign):
    m, dim = states.shape
    for b in range(dim):
        ph = np.exp(0.5j * sign * _layer_angle(n, angles, b))
        for r in range(m):
            states[r, b] *= ph


@_jit
def _butterfly(states, n, a, b, c, d):
    m, dim = states.shape
    half = dim >> 1
    for q in range(n):
        s = n - 1 - q
        stride = 1 << s
        for r in range(m):
            for g in range(half):
                i0 = ((g >> s) << (s + 1)) | (g & (stride - 1))
                i1 = i0 | stride
                lo = states[r, i0]
                hi = states[r, i1]
                states[r, i0] = a * lo + b * hi
                states[r, i1] = c * lo + d * hi


@_jit
def rx_global(states, n, sign):
    off = -1j * sign * _INV_SQRT2
    _butterfly(states, n, _INV_SQRT2 + 0j, off, off, _INV_SQRT2 + 0j)


@_jit
def hadamard_all(states, n):
    h = _INV_SQRT2 + 0j
    _butterfly(states, n, h, h, h, -h)


@_jit
def _scale_diag(states, theta, diag):
    m, dim = states.shape
    for b in range(dim):
        ph = np.exp(-1j * theta * diag[b])
        for r in range(m):
            states[r, b] *= ph


@_jit
def ms(states, n, theta, diag):
    hadamard_all(states, n)
    _scale_diag(states, theta, diag)
    hadamard_all(states, n)


@_jit
def phase(states, theta):
    ph = np.exp(1j * theta)
    m, dim = states.shape
    for r in range(m):
        for b in range(dim):
            states[r, b] *= ph


@_jit
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


@_jit
def simulate(n, ops, slots, x, states, diag, adjoint):
    if adjoint:
        for i in range(ops.shape[0] - 1, -1, -1):
            _apply(ops[i], slots[i], n, x, states, diag, -1.0)
    else:
        for i in range(ops.shape[0]):
            _apply(ops[i], slots[i], n, x, states, diag, 1.0)


@_jit
def _overlap(bra, ket):
    acc = 0j
    m, dim = bra.shape
    for r in range(m):
        for b in range(dim):
            acc += np.conj(bra[r, b]) * ket[r, b]
    return acc


@_jit
def evaluate(n, ops, slots, x, bra0, ket0, bra, ket, diag, grad, want_grad):
    m, dim = ket0.shape
    ket[:, :] = ket0
    simulate(n, ops, slots, x, ket, diag, True)
    cost = 2.0 * (1.0 - _overlap(bra0, ket).real / m)
    if not want_grad:
        return cost

    bra[:, :] = bra0
    grad[:] = 0.0
    for i in range(ops.shape[0]):
        op = ops[i]
        slot = slots[i]
        if op == RZ_LAYER:
            for b in range(dim):
                w = 0j
                for r in range(m):
                    w += np.conj(bra[r, b]) * ket[r, b]
                for q in range(n):
                    # sweep generator is +Z_q/2
                    if (b >> (n - 1 - q)) & 1:
                        grad[slot + q] -= w.imag / m
                    else:
                        grad[slot + q] += w.imag / m
        elif op == MS:
            hadamard_all(bra, n)
            hadamard_all(ket, n)
            val = 0j
            for r in range(m):
                for b in range(dim):
                    val += np.conj(bra[r, b]) * ket[r, b] * diag[b]
            grad[slot] = 2.0 * val.imag / m
            _scale_diag(bra, x[slot], diag)
            _scale_diag(ket, x[slot], diag)
            hadamard_all(bra, n)
            hadamard_all(ket, n)
            continue
        elif op == PHASE:
            grad[slot] = -2.0 * _overlap(bra, ket).imag / m
        _apply(op, slot, n, x, bra, diag, 1.0)
        _apply(op, slot, n, x, ket, diag, 1.0)
    return cost
