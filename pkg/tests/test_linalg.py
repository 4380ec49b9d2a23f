import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from trapsynth.gates import H, X, rz
from trapsynth.linalg import (DimensionError, as_state, basis_state, dagger, inner, kron,
                              n_qubits_for, vec_norm)

I2 = np.eye(2)


def test_kron_identity():
    assert np.array_equal(kron(I2, I2), np.eye(4))


def test_kron_x_identity_hand_expansion():
    expected = np.zeros((4, 4))
    for i, j in [(0, 2), (1, 3), (2, 0), (3, 1)]:
        expected[i, j] = 1
    assert np.array_equal(kron(X, I2), expected)


def test_kron_hh_on_e0_is_uniform():
    out = kron(H, H) @ basis_state(2, 0)
    assert np.allclose(out, [0.5] * 4, atol=1e-15)


def test_kron_entry_formula(rng):
    a = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    b = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    k = kron(a, b)
    assert k.shape == (6, 6)
    for i1, j1, i2, j2 in np.ndindex(2, 3, 3, 2):
        assert abs(k[i1 * 3 + i2, j1 * 2 + j2] - a[i1, j1] * b[i2, j2]) < 1e-15


def test_kron_associative(rng):
    a, b, c = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3))
    assert np.max(np.abs(kron(kron(a, b), c) - kron(a, kron(b, c)))) < 1e-14


def test_kron_size_limit():
    big = np.eye(1 << 6)
    with pytest.raises(DimensionError):
        kron(big, big)


def test_dagger():
    assert np.array_equal(dagger(np.eye(2)), np.eye(2))
    assert np.array_equal(dagger(np.diag([1j, -1j])), np.diag([-1j, 1j]))
    assert np.allclose(dagger(rz(0.7)), rz(-0.7), atol=1e-16)


@given(arrays(np.float64, (3, 3), elements=st.floats(-10, 10)),
       arrays(np.float64, (3, 3), elements=st.floats(-10, 10)))
def test_dagger_involution(re, im):
    m = re + 1j * im
    assert np.array_equal(dagger(dagger(m)), m)


def test_vec_norm_examples():
    assert vec_norm(basis_state(1)) == 1.0
    assert vec_norm(np.zeros(4)) == 0.0
    assert abs(vec_norm([3 / 5, 4j / 5]) - 1.0) < 1e-15


def test_inner_examples():
    e0, e1 = basis_state(1, 0), basis_state(1, 1)
    assert inner(e0, e0) == 1
    assert inner(e0, e1) == 0
    assert abs(inner((e0 + e1) / np.sqrt(2), e1) - 1 / np.sqrt(2)) < 1e-15
    with pytest.raises(DimensionError):
        inner(e0, basis_state(2))


@settings(max_examples=50)
@given(arrays(np.float64, (2, 8), elements=st.floats(-1e3, 1e3)),
       arrays(np.float64, (2, 8), elements=st.floats(-1e3, 1e3)))
def test_inner_conjugate_symmetry(re, im):
    a, b = re[0] + 1j * im[0], re[1] + 1j * im[1]
    assert inner(a, b) == pytest.approx(np.conj(inner(b, a)), abs=1e-9)
    assert inner(a, a).imag == 0
    assert inner(a, a).real == pytest.approx(vec_norm(a) ** 2, rel=1e-12)


def test_constructors_reject_non_finite():
    with pytest.raises(ValueError):
        as_state([1.0, np.nan])
    with pytest.raises(ValueError):
        kron([[np.inf]], I2)


def test_power_of_two():
    assert n_qubits_for(8) == 3
    with pytest.raises(DimensionError):
        n_qubits_for(3)
    with pytest.raises(ValueError):
        as_state([1.0, 1.0], normalized=True)
