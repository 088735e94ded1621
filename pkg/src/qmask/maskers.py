"""Masking isometries built from the teleportation primitives, and their inverses.

Register layouts (array index = position in the register):

* ``FOUR_HEAVY``: ``[d*d, d, d, d]`` = apparatus 0, Alice's sites 1 and 2, Bob's site 3.
* ``FOUR``: ``[d, d, d, d]`` with the same roles and a d-level apparatus.
* ``FOUR_LITERAL_QUTRIT``: ``[3, 3, 3, 3]``, same roles.
* ``THREE``: ``[d, d, d]`` holding systems 1, 2, 3 at indices 0, 1, 2.

Functions taking a site argument for ``THREE`` use the system labels 1..3.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import (
    DensityMatrix,
    MeasurementRecord,
    PureState,
    RegisterShape,
    apply_local,
    basis_state,
    extract_site,
    fidelity_mixed,
    measure_site,
    partial_trace,
    tensor,
)
from .gates import (
    BellLabel,
    alice_normalizer,
    bell_state,
    chi_state,
    correction_weyl,
    cshift,
    fourier_state,
)

RANGE_TOL = 1e-8


class NotInRangeError(ValueError):
    """The state handed to an unmasker is not an output of the matching masker."""


class SchemeId(enum.Enum):
    FOUR_HEAVY = "four-heavy"
    FOUR = "four"
    FOUR_LITERAL_QUTRIT = "four-literal-qutrit"
    THREE = "three"


@dataclass(frozen=True)
class MaskScheme:
    id: SchemeId
    d: int

    def __post_init__(self):
        object.__setattr__(self, "id", SchemeId(self.id))
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"d must be an integer >= 2, got {self.d}")
        if self.id is SchemeId.FOUR_LITERAL_QUTRIT and self.d != 3:
            raise ValueError("the literal qutrit masker exists only for d=3")

    @property
    def output_shape(self) -> RegisterShape:
        d = self.d
        if self.id is SchemeId.FOUR_HEAVY:
            return RegisterShape((d * d, d, d, d))
        if self.id is SchemeId.THREE:
            return RegisterShape((d, d, d))
        return RegisterShape((d, d, d, d))

    @property
    def site_labels(self) -> tuple[int, ...]:
        """System labels of the register positions."""
        return (1, 2, 3) if self.id is SchemeId.THREE else (0, 1, 2, 3)


def _check_input(d: int, state: PureState) -> None:
    if state.dims != (d,):
        raise ValueError(f"expected a single {d}-level site, got register {state.dims}")


def _channel(d: int) -> PureState:
    return bell_state(d, BellLabel(0, 0, d))


def mask_four_heavy(d: int, input: PureState) -> PureState:
    """``d^{-1} sum_kl |d*l + k>_0 |phi_kl>_12 |chi_kl>_3``."""
    _check_input(d, input)
    amp = np.zeros(d**5, dtype=complex)
    for lab in BellLabel.all(d):
        nu = basis_state((d * d,), lab.index)
        amp += tensor(nu, bell_state(d, lab), chi_state(d, lab, input)).amp
    return PureState(RegisterShape((d * d, d, d, d)), amp / d)


def mask_four(d: int, input: PureState) -> PureState:
    """Two-step masker with a d-level apparatus.

    Result: ``d^{-1/2} sum_{k,m} alpha_k |k-m>_0 |k-m>_1 |m>_2 |m>_3``.
    """
    _check_input(d, input)
    psi = tensor(input, _channel(d))
    # factorize the Bell basis: |i1>|i2> -> |i1 - i2>|i2>
    psi = apply_local(psi, cshift(d, -1), (1, 0))
    psi = tensor(basis_state((d,), 0), psi)
    # apparatus records the computational value of site 1
    return apply_local(psi, cshift(d, +1), (1, 0))


def mask_four_literal_qutrit(input: PureState) -> PureState:
    """The qutrit superposition in which the apparatus stores the coefficient index.

    Each branch ``alpha_k`` carries ``|k>_0 |b>_1 |psi_j>_2 |a>_3`` for the three
    ``(j, a, b)`` triples listed in ``_LITERAL_TERMS[k]``. Its apparatus marginal is
    ``diag(|alpha_k|^2)``, so it does not mask.
    """
    _check_input(3, input)
    amp = np.zeros(81, dtype=complex)
    for k, terms in enumerate(_LITERAL_TERMS):
        for j, a, b in terms:
            term = tensor(
                basis_state((3,), k), basis_state((3,), b), fourier_state(3, j), basis_state((3,), a)
            )
            amp += input.amp[k] * term.amp
    return PureState(RegisterShape((3, 3, 3, 3)), amp / np.sqrt(3))


# (fourier index on site 2, value on site 3, value on site 1)
_LITERAL_TERMS = (
    ((0, 0, 0), (1, 2, 1), (2, 1, 2)),
    ((2, 1, 0), (0, 0, 1), (1, 2, 2)),
    ((1, 2, 0), (2, 1, 1), (0, 0, 2)),
)


def mask_three(d: int, input: PureState) -> PureState:
    """Tripartite masker ``d^{-1/2} sum_{k,m} alpha_k |k+m>_1 |k+2m>_2 |m>_3``.

    Masks every site for odd ``d``; for even ``d`` system 2 keeps the parity of
    the input index.
    """
    _check_input(d, input)
    psi = tensor(input, _channel(d))
    psi = apply_local(psi, cshift(d, +1), (1, 0))
    return apply_local(psi, cshift(d, +1), (0, 1))


_MASKERS = {
    SchemeId.FOUR_HEAVY: mask_four_heavy,
    SchemeId.FOUR: mask_four,
    SchemeId.FOUR_LITERAL_QUTRIT: lambda d, x: mask_four_literal_qutrit(x),
    SchemeId.THREE: mask_three,
}


def mask(scheme: MaskScheme, input: PureState) -> PureState:
    return _MASKERS[scheme.id](scheme.d, input)


def isometry_matrix(scheme: MaskScheme) -> np.ndarray:
    """Columns are the masked computational basis states."""
    d = scheme.d
    return np.column_stack([mask(scheme, basis_state((d,), i)).amp for i in range(d)])


def range_residual(scheme: MaskScheme, state: PureState) -> float:
    """Norm of the component of ``state`` outside the masker's range."""
    if state.dims != scheme.output_shape.dims:
        raise ValueError(f"expected register {scheme.output_shape.dims}, got {state.dims}")
    v = isometry_matrix(scheme)
    out = state.amp - v @ (v.conj().T @ state.amp)
    return float(np.linalg.norm(out))


def _extract(state: PureState, site: int, rest: PureState) -> PureState:
    try:
        return extract_site(state, site, rest, tol=RANGE_TOL)
    except ValueError as exc:
        raise NotInRangeError(str(exc)) from exc


def unmask_four(masked: PureState) -> PureState:
    d = masked.dims[0]
    if masked.dims != (d, d, d, d):
        raise ValueError(f"expected a four-site qudit register, got {masked.dims}")
    psi = apply_local(masked, cshift(d, -1), (1, 0))
    psi = apply_local(psi, cshift(d, +1), (2, 1))
    rest = tensor(basis_state((d,), 0), _channel(d))
    return _extract(psi, 1, rest)


def unmask_four_heavy(
    masked: PureState,
    rng: np.random.Generator | None = None,
    force: int | None = None,
) -> tuple[PureState, MeasurementRecord]:
    """Measure the apparatus, then undo the Bell outcome on both sides.

    Bob's site receives the input after the Weyl correction; Alice's sites are
    factorized and normalized to ``|0> (x) fourier_state(d, 0)``.
    """
    d = masked.dims[1]
    scheme = MaskScheme(SchemeId.FOUR_HEAVY, d)
    residual = range_residual(scheme, masked)
    if residual > RANGE_TOL:
        raise NotInRangeError(f"state is outside the masker's range (residual {residual:.3g})")
    record = measure_site(masked, 0, rng=rng, force=force)
    lab = BellLabel.from_index(d, record.outcome)
    psi = apply_local(record.post_state, cshift(d, -1), (2, 1))
    psi = apply_local(psi, alice_normalizer(d, lab), (1, 2))
    psi = apply_local(psi, correction_weyl(d, lab), (3,))
    rest = tensor(basis_state((d * d,), record.outcome), basis_state((d,), 0), fourier_state(d, 0))
    return _extract(psi, 3, rest), record


def unmask_three(masked: PureState) -> PureState:
    d = masked.dims[0]
    if masked.dims != (d, d, d):
        raise ValueError(f"expected a three-site qudit register, got {masked.dims}")
    psi = apply_local(masked, cshift(d, -1), (0, 1))
    psi = apply_local(psi, cshift(d, -1), (1, 0))
    return _extract(psi, 0, _channel(d))


def unmask_literal_qutrit(masked: PureState) -> PureState:
    """Invert the literal qutrit masker through its isometry's adjoint."""
    scheme = MaskScheme(SchemeId.FOUR_LITERAL_QUTRIT, 3)
    residual = range_residual(scheme, masked)
    if residual > RANGE_TOL:
        raise NotInRangeError(f"state is outside the masker's range (residual {residual:.3g})")
    coeffs = isometry_matrix(scheme).conj().T @ masked.amp
    return PureState(RegisterShape((3,)), coeffs / np.linalg.norm(coeffs))


@dataclass(frozen=True)
class RecoveryReport:
    target: int
    rho: DensityMatrix
    fidelity: float
    purity: float


# gate pairs (a, b): shift-down controlled by a on b, then controlled by b on a
_ROTATED_PAIRS = {1: (1, 2), 2: (2, 3), 3: (1, 3)}


def unmask_three_to(masked: PureState, target: int, original: PureState) -> RecoveryReport:
    """Apply the rotated gate pair aimed at system ``target`` and report what arrives.

    No recovery is assumed: the returned fidelity is ``<original|rho|original>``
    for the reduced state on the target system.
    """
    if target not in (2, 3):
        raise ValueError(f"target must be system 2 or 3, got {target}")
    d = masked.dims[0]
    scheme = MaskScheme(SchemeId.THREE, d)
    residual = range_residual(scheme, masked)
    if residual > RANGE_TOL:
        raise NotInRangeError(f"state is outside the masker's range (residual {residual:.3g})")
    a, b = _ROTATED_PAIRS[target]
    psi = apply_local(masked, cshift(d, -1), (a - 1, b - 1))
    psi = apply_local(psi, cshift(d, -1), (b - 1, a - 1))
    rho = partial_trace(psi, (target - 1,))
    purity = float(np.real(np.trace(rho.mat @ rho.mat)))
    return RecoveryReport(target, rho, fidelity_mixed(original, rho), purity)


def unmask(scheme: MaskScheme, masked: PureState, rng=None, force=None) -> PureState:
    """Scheme dispatch returning only the recovered single-site state."""
    if scheme.id is SchemeId.FOUR_HEAVY:
        return unmask_four_heavy(masked, rng=rng, force=force)[0]
    if scheme.id is SchemeId.FOUR:
        return unmask_four(masked)
    if scheme.id is SchemeId.THREE:
        return unmask_three(masked)
    return unmask_literal_qutrit(masked)
