"""Standard qudit teleportation on a three-site register (input, Alice, Bob)."""

from __future__ import annotations

import numpy as np

from .core import PureState, apply_local, basis_state, extract_site, measure_site, tensor
from .gates import BellLabel, bell_basis, bell_state, chi_state, correction_weyl


def _channel(d: int) -> PureState:
    return bell_state(d, BellLabel(0, 0, d))


def bell_decomposition_residual(d: int, input: PureState) -> float:
    """L2 distance between ``input (x) phi_00`` and ``d^{-1} sum_kl phi_kl (x) chi_kl``."""
    direct = tensor(input, _channel(d)).amp
    expanded = np.zeros_like(direct)
    for lab in BellLabel.all(d):
        expanded += tensor(bell_state(d, lab), chi_state(d, lab, input)).amp
    return float(np.linalg.norm(direct - expanded / d))


def _rotated_to_bell_frame(d: int, input: PureState) -> PureState:
    # after B^dag on sites (0, 1) the joint index d*l + k is (site0=l, site1=k)
    psi = tensor(input, _channel(d))
    return apply_local(psi, bell_basis(d).dag(), (0, 1))


def outcome_probabilities(d: int, input: PureState) -> np.ndarray:
    """Exact Bell-outcome probabilities, indexed by ``d*l + k``."""
    psi = _rotated_to_bell_frame(d, input)
    return (np.abs(psi.tensor_view()) ** 2).sum(axis=2).ravel()


def teleport(
    d: int,
    input: PureState,
    rng: np.random.Generator | None = None,
    force: BellLabel | None = None,
) -> tuple[PureState, BellLabel, float]:
    """Bell-measure sites (0, 1), correct site 2, return Bob's state.

    With ``force`` the measurement is conditioned on that outcome and the
    returned probability is its exact Born weight.
    """
    if input.dims != (d,):
        raise ValueError(f"expected a single {d}-level site, got {input.dims}")
    psi = _rotated_to_bell_frame(d, input)
    first = measure_site(psi, 0, rng=rng, force=None if force is None else force.l)
    second = measure_site(first.post_state, 1, rng=rng, force=None if force is None else force.k)
    label = BellLabel(second.outcome, first.outcome, d)
    out = apply_local(second.post_state, correction_weyl(d, label), (2,))
    rest = tensor(basis_state((d,), label.l), basis_state((d,), label.k))
    received = extract_site(out, 2, rest)
    return received, label, first.probability * second.probability
