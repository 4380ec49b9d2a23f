import numpy as np
import pytest
import scipy.linalg

from conftest import random_state
from trapsynth.gates import (GateKind, GateOp, H, I2, X, apply_gate, apply_generator, gate_dense,
                             hamming_weight, ms_diagonal, rx, rz, sum_x)
from trapsynth.linalg import basis_state, kron, kron_all, unitarity_residual


def all_gates(n):
    yield GateOp(GateKind.LOCAL_RZ, n, slot=0, qubit=n - 1)
    yield GateOp(GateKind.LOCAL_RZ, n, slot=0, qubit=0)
    yield GateOp(GateKind.GLOBAL_RX, n, sign=1)
    yield GateOp(GateKind.GLOBAL_RX, n, sign=-1)
    yield GateOp(GateKind.MS, n, slot=0)
    yield GateOp(GateKind.GLOBAL_PHASE, n, slot=0)


def test_hamming_weight():
    assert hamming_weight(0) == 0
    assert hamming_weight(5) == 2
    assert all(hamming_weight(1 << k) == 1 for k in range(40))
    with pytest.raises(ValueError):
        hamming_weight(-1)


def test_ms_identity_at_zero(rng, backend):
    psi = random_state(rng, 3)
    out = apply_gate(GateOp(GateKind.MS, 3, slot=0), [0.0], psi, backend)
    assert np.max(np.abs(out - psi)) < 1e-14


def test_ms_single_qubit_is_global_phase(rng, backend):
    psi = random_state(rng, 1)
    theta = 1.234
    out = apply_gate(GateOp(GateKind.MS, 1, slot=0), [theta], psi, backend)
    assert np.max(np.abs(out - np.exp(-1j * theta / 4) * psi)) < 1e-14


def test_rz_pi_on_zero(backend):
    out = apply_gate(GateOp(GateKind.LOCAL_RZ, 1, slot=0, qubit=0), [np.pi], basis_state(1), backend)
    assert np.max(np.abs(out - np.array([-1j, 0]))) < 1e-15


def test_global_rx_pair_cancels(rng, backend):
    psi = random_state(rng, 4)
    out = apply_gate(GateOp(GateKind.GLOBAL_RX, 4, sign=1), [], psi, backend)
    out = apply_gate(GateOp(GateKind.GLOBAL_RX, 4, sign=-1), [], out, backend)
    assert np.max(np.abs(out - psi)) < 1e-14


def test_generator_examples():
    psi = np.array([0.6, 0.8j])
    assert np.array_equal(apply_generator(GateOp(GateKind.GLOBAL_PHASE, 1, slot=0), psi), psi)
    out = apply_generator(GateOp(GateKind.LOCAL_RZ, 1, slot=0, qubit=0), basis_state(1))
    assert np.array_equal(out, [-0.5, 0])
    s = kron(X, I2) + kron(I2, X)
    dense = -(s @ s) / 4 @ basis_state(2)
    out = apply_generator(GateOp(GateKind.MS, 2, slot=0), basis_state(2))
    assert np.max(np.abs(out - dense)) < 1e-12
    with pytest.raises(ValueError):
        apply_generator(GateOp(GateKind.GLOBAL_RX, 2, sign=1), basis_state(2))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_generator_twice_matches_dense_square(n):
    s = sum_x(n)
    dense = {
        GateKind.LOCAL_RZ: kron_all([-np.diag([1, -1]) / 2] + [I2] * (n - 1)),
        GateKind.MS: -(s @ s) / 4,
        GateKind.GLOBAL_PHASE: np.eye(1 << n),
    }
    gates = [GateOp(GateKind.LOCAL_RZ, n, slot=0, qubit=0), GateOp(GateKind.MS, n, slot=0),
             GateOp(GateKind.GLOBAL_PHASE, n, slot=0)]
    for g in gates:
        om2 = dense[g.kind] @ dense[g.kind]
        for b in range(1 << n):
            e = basis_state(n, b)
            assert np.max(np.abs(apply_generator(g, apply_generator(g, e)) - om2 @ e)) < 1e-12


def test_gate_dense_examples():
    g = GateOp(GateKind.LOCAL_RZ, 2, slot=0, qubit=1)
    assert np.array_equal(gate_dense(g, [0.0]), np.eye(4))
    rx1 = gate_dense(GateOp(GateKind.GLOBAL_RX, 1, sign=1), [])
    assert np.max(np.abs(rx1 - np.array([[1, -1j], [-1j, 1]]) / np.sqrt(2))) < 1e-15
    theta = 0.83
    hh = kron(H, H)
    expected = hh @ np.diag(np.exp(-1j * theta * np.array([1, 0, 0, 1]))) @ hh
    assert np.max(np.abs(gate_dense(GateOp(GateKind.MS, 2, slot=0), [theta]) - expected)) < 1e-12


def test_ms_eigendecomposition_oracle():
    # independent route: eigendecomposition of the Hermitian sum_x^2
    theta = 2.1
    s = sum_x(3)
    w, v = np.linalg.eigh(s @ s)
    via_eig = v @ np.diag(np.exp(-1j * theta * w / 4)) @ v.conj().T
    assert np.max(np.abs(gate_dense(GateOp(GateKind.MS, 3, slot=0), [theta]) - via_eig)) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ms_hadamard_diagonalization(n, rng):
    hn = kron_all([H] * n)
    for theta in rng.uniform(-2 * np.pi, 2 * np.pi, 20):
        d = np.diag(np.exp(-1j * theta * ms_diagonal(n)))
        ms = gate_dense(GateOp(GateKind.MS, n, slot=0), [theta])
        assert np.linalg.norm(ms - hn @ d @ hn) < 1e-12


def test_ms_diagonal_formula():
    n = 4
    for b in range(1 << n):
        assert ms_diagonal(n)[b] == (n - 2 * hamming_weight(b)) ** 2 / 4


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_dense_unitary_and_agrees_with_kernels(n, rng, backend):
    theta = [rng.uniform(-7, 7)]
    for g in all_gates(n):
        u = gate_dense(g, theta)
        assert unitarity_residual(u) < 1e-12
        for _ in range(100 if n <= 3 else 20):
            psi = random_state(rng, n)
            assert np.max(np.abs(apply_gate(g, theta, psi, backend) - u @ psi)) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_generator_matches_finite_difference(n, rng):
    h = 1e-6
    for g in all_gates(n):
        if not g.parameterized:
            continue
        theta = rng.uniform(-3, 3)
        psi = random_state(rng, n)
        fd = (apply_gate(g, [theta + h], psi) - apply_gate(g, [theta - h], psi)) / (2 * h)
        analytic = 1j * apply_generator(g, apply_gate(g, [theta], psi))
        assert np.max(np.abs(fd - analytic)) < 1e-6


def test_gate_validation():
    with pytest.raises(ValueError):
        GateOp(GateKind.LOCAL_RZ, 2, slot=0, qubit=2)
    with pytest.raises(ValueError):
        GateOp(GateKind.GLOBAL_RX, 2, slot=0)
    with pytest.raises(ValueError):
        GateOp(GateKind.MS, 2)
    with pytest.raises(IndexError):
        apply_gate(GateOp(GateKind.MS, 2, slot=3), [0.0], basis_state(2))
    with pytest.raises(ValueError):
        apply_gate(GateOp(GateKind.MS, 2, slot=0), [0.0], basis_state(3))


def test_rx_matches_matrix_exponential():
    for t in (0.3, np.pi / 2, -1.1):
        assert np.max(np.abs(rx(t) - scipy.linalg.expm(-0.5j * t * X))) < 1e-14
        assert np.max(np.abs(rz(t) - scipy.linalg.expm(-0.5j * t * np.diag([1, -1])))) < 1e-14
