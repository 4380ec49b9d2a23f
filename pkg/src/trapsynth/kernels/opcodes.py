"""Opcodes of a compiled circuit program.

A program is a pair of int64 arrays ``(ops, slots)``. ``slots[i]`` is the
first parameter index consumed by op ``i`` (``-1`` when unparameterized).
An ``RZ_LAYER`` consumes ``n`` consecutive slots, one per qubit.
"""

RZ_LAYER = 0
RX_PLUS = 1
RX_MINUS = 2
MS = 3
PHASE = 4
