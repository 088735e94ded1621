import numpy as np
import pytest

from qmask.core import basis_state, fidelity_pure
from qmask.gates import BellLabel
from qmask.teleport import bell_decomposition_residual, outcome_probabilities, teleport

from conftest import gaussian_state


@pytest.mark.parametrize("d", range(2, 8))
def test_decomposition_residual(d, rng):
    for _ in range(20):
        assert bell_decomposition_residual(d, gaussian_state([d], rng)) < 1e-12


def test_decomposition_qubit_zero():
    assert bell_decomposition_residual(2, basis_state([2], 0)) < 1e-12


def test_outcome_00_needs_no_correction(rng):
    x = gaussian_state([3], rng)
    got, lab, p = teleport(3, x, force=BellLabel(0, 0, 3))
    assert lab == BellLabel(0, 0, 3)
    np.testing.assert_allclose(got.amp, x.amp, atol=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_every_outcome_recovers(d, rng):
    for _ in range(50):
        x = gaussian_state([d], rng)
        for lab in BellLabel.all(d):
            got, got_lab, p = teleport(d, x, force=lab)
            assert got_lab == lab
            assert abs(p - 1 / d**2) < 1e-12
            assert fidelity_pure(got, x) > 1 - 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_exact_probabilities_uniform(d, rng):
    for _ in range(10):
        p = outcome_probabilities(d, gaussian_state([d], rng))
        assert np.max(np.abs(p - 1 / d**2)) < 1e-12


def test_sampled_teleport_deterministic(rng):
    x = gaussian_state([4], rng)
    a = teleport(4, x, rng=np.random.default_rng(11))
    b = teleport(4, x, rng=np.random.default_rng(11))
    assert a[1] == b[1]
    assert fidelity_pure(a[0], x) > 1 - 1e-12


def test_teleport_shape_error():
    with pytest.raises(ValueError):
        teleport(3, basis_state([2], 0))
