import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmask.core import apply_local, basis_state, fidelity_pure, tensor
from qmask.gates import (
    BellLabel,
    alice_normalizer,
    bell_basis,
    bell_state,
    chi_state,
    correction_weyl,
    cshift,
    fourier_state,
    omega,
    phase_z,
    shift_x,
)

from conftest import gaussian_state, ket

DIMS = range(2, 8)
W3 = np.exp(2j * np.pi / 3)


def is_unitary(m, tol=1e-12):
    return np.max(np.abs(m.conj().T @ m - np.eye(len(m)))) < tol


def test_shift_qutrit_action():
    x = shift_x(3).mat
    np.testing.assert_array_equal(x @ [1, 0, 0], [0, 1, 0])
    np.testing.assert_array_equal(x @ [0, 0, 1], [1, 0, 0])


def test_shift_dagger_is_qutrit_u():
    # U = |2><0| + |0><1| + |1><2|
    u = np.zeros((3, 3))
    u[2, 0] = u[0, 1] = u[1, 2] = 1
    np.testing.assert_array_equal(shift_x(3).dag().mat, u)


def test_phase_qutrit_action():
    np.testing.assert_allclose(phase_z(3).mat @ [0, 1, 0], [0, W3, 0], atol=1e-15)


@pytest.mark.parametrize("d", DIMS)
def test_weyl_algebra(d):
    x, z = shift_x(d).mat, phase_z(d).mat
    eye = np.eye(d)
    assert np.max(np.abs(np.linalg.matrix_power(x, d) - eye)) < 1e-12
    assert np.max(np.abs(np.linalg.matrix_power(z, d) - eye)) < 1e-12
    assert np.max(np.abs(z @ x - omega(d) * x @ z)) < 1e-12


@pytest.mark.parametrize("d", [1, 0, 2.5])
def test_bad_dimension(d):
    with pytest.raises(ValueError):
        shift_x(d)
    with pytest.raises(ValueError):
        phase_z(d)


def test_fourier_qubit_and_qutrit():
    np.testing.assert_allclose(fourier_state(2, 0).amp, [2**-0.5, 2**-0.5], atol=1e-15)
    np.testing.assert_allclose(fourier_state(2, 1).amp, [2**-0.5, -(2**-0.5)], atol=1e-15)
    np.testing.assert_allclose(fourier_state(3, 1).amp, np.array([1, W3, W3**2]) / np.sqrt(3), atol=1e-15)
    with pytest.raises(ValueError):
        fourier_state(3, 3)


@pytest.mark.parametrize("d", DIMS)
def test_fourier_orthonormal(d):
    f = np.column_stack([fourier_state(d, k).amp for k in range(d)])
    assert np.max(np.abs(f.conj().T @ f - np.eye(d))) < 1e-12


def test_cshift_qubit_is_cnot():
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    np.testing.assert_array_equal(cshift(2, 1).mat, cnot)
    np.testing.assert_array_equal(cshift(2, -1).mat, cnot)


def test_cshift_down_qutrit():
    out = cshift(3, -1).mat @ ket((3, 3), 1, 0)
    np.testing.assert_array_equal(out, ket((3, 3), 1, 2))


@pytest.mark.parametrize("d", DIMS)
def test_cshift_permutation_and_inverse(d):
    for s in (1, -1):
        m = cshift(d, s).mat
        assert set(np.unique(m)) <= {0, 1}
        np.testing.assert_array_equal(m.sum(axis=0), 1)
        np.testing.assert_array_equal(m.sum(axis=1), 1)
    prod = cshift(d, 1).mat @ cshift(d, -1).mat
    assert np.max(np.abs(prod - np.eye(d * d))) < 1e-12


def test_cshift_bad_direction():
    with pytest.raises(ValueError):
        cshift(3, 2)


def test_bell_qubit_channel():
    np.testing.assert_allclose(bell_state(2, BellLabel(0, 0, 2)).amp, np.array([1, 0, 0, 1]) / np.sqrt(2), atol=1e-15)


def test_bell_qutrit_k1():
    expected = (ket((3, 3), 0, 0) + W3 * ket((3, 3), 1, 1) + W3**2 * ket((3, 3), 2, 2)) / np.sqrt(3)
    np.testing.assert_allclose(bell_state(3, BellLabel(1, 0, 3)).amp, expected, atol=1e-15)


def test_bell_qutrit_general_display():
    # (|l,0> + w^k |l+1,1> + w^{2k} |l+2,2>)/sqrt3 for every label
    for k in range(3):
        for l in range(3):
            expected = sum(W3 ** (i * k) * ket((3, 3), (l + i) % 3, i) for i in range(3)) / np.sqrt(3)
            np.testing.assert_allclose(bell_state(3, BellLabel(k, l, 3)).amp, expected, atol=1e-15)


@pytest.mark.parametrize("d", DIMS)
def test_bell_basis_orthonormal(d):
    b = bell_basis(d).mat
    assert np.max(np.abs(b.conj().T @ b - np.eye(d * d))) < 1e-12


def test_label_validation():
    with pytest.raises(ValueError):
        BellLabel(3, 0, 3)
    with pytest.raises(ValueError):
        bell_state(2, BellLabel(0, 0, 3))
    assert BellLabel.from_index(3, 7) == BellLabel(1, 2, 3)
    assert BellLabel(1, 2, 3).index == 7


def test_chi_identity_label(rng):
    x = gaussian_state([4], rng)
    np.testing.assert_allclose(chi_state(4, BellLabel(0, 0, 4), x).amp, x.amp, atol=1e-15)


def test_chi_qutrit_display(rng):
    x = gaussian_state([3], rng)
    a0, a1, a2 = x.amp
    np.testing.assert_allclose(chi_state(3, BellLabel(0, 1, 3), x).amp, [a1, a2, a0], atol=1e-15)
    # alpha_l |0> + w^{2k} alpha_{l+1} |1> + w^k alpha_{l+2} |2>
    for k in range(3):
        for l in range(3):
            expected = [x.amp[l], W3 ** (2 * k) * x.amp[(l + 1) % 3], W3**k * x.amp[(l + 2) % 3]]
            np.testing.assert_allclose(chi_state(3, BellLabel(k, l, 3), x).amp, expected, atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_chi_orbit_completeness(d, rng):
    x = gaussian_state([d], rng)
    total = sum(np.outer(c.amp, c.amp.conj()) for c in (chi_state(d, lab, x) for lab in BellLabel.all(d)))
    assert np.max(np.abs(total - d * np.eye(d))) < 1e-10


def test_chi_shape_mismatch():
    with pytest.raises(ValueError):
        chi_state(3, BellLabel(0, 0, 3), basis_state([2], 0))


def test_correction_identity():
    np.testing.assert_allclose(correction_weyl(3, BellLabel(0, 0, 3)).mat, np.eye(3), atol=1e-15)


def test_correction_qutrit_label_12(rng):
    lab = BellLabel(1, 2, 3)
    r = correction_weyl(3, lab)
    for _ in range(20):
        x = gaussian_state([3], rng)
        assert fidelity_pure(apply_local(chi_state(3, lab, x), r, [0]), x) > 1 - 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_correction_undoes_chi(d, rng):
    for lab in BellLabel.all(d):
        r = correction_weyl(d, lab)
        assert is_unitary(r.mat)
    for _ in range(100):
        x = gaussian_state([d], rng)
        lab = BellLabel(int(rng.integers(d)), int(rng.integers(d)), d)
        back = apply_local(chi_state(d, lab, x), correction_weyl(d, lab), [0])
        assert abs(fidelity_pure(back, x) - 1) < 1e-12


def test_alice_normalizer_identity():
    np.testing.assert_allclose(alice_normalizer(3, BellLabel(0, 0, 3)).mat, np.eye(9), atol=1e-15)


def test_alice_normalizer_qutrit_21():
    # label (k=2, l=1): |1> (x) psi_2 -> |0> (x) psi_0
    a = alice_normalizer(3, BellLabel(2, 1, 3))
    out = a.mat @ tensor(basis_state([3], 1), fourier_state(3, 2)).amp
    target = tensor(basis_state([3], 0), fourier_state(3, 0)).amp
    assert np.max(np.abs(out - target)) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_alice_normalizer_all_labels(d):
    target = tensor(basis_state([d], 0), fourier_state(d, 0)).amp
    for lab in BellLabel.all(d):
        a = alice_normalizer(d, lab).mat
        assert is_unitary(a)
        out = a @ tensor(basis_state([d], lab.l), fourier_state(d, lab.k)).amp
        assert abs(abs(np.vdot(target, out)) - 1) < 1e-12


@settings(max_examples=30, deadline=None)
@given(d=st.integers(2, 7), k=st.integers(0, 6), l=st.integers(0, 6))
def test_bell_is_maximally_entangled(d, k, l):
    from qmask.core import partial_trace

    lab = BellLabel(k % d, l % d, d)
    rho = partial_trace(bell_state(d, lab), [0]).mat
    assert np.max(np.abs(rho - np.eye(d) / d)) < 1e-12
