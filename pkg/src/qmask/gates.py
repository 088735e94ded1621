"""Qudit operators and special states.

Conventions used throughout the package:

* ``omega(d) = exp(2j*pi/d)``.
* ``shift_x(d)`` shifts up, ``X|k> = |k+1 mod d>``; its adjoint is the
  shift-down operator that the qutrit construction calls ``U``.
* Bell labels ``(k, l)`` carry a phase index ``k`` and a shift index ``l``:
  ``|phi_kl> = d^{-1/2} sum_i omega^{ik} |l+i>|i>``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Operator, PureState, RegisterShape


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def _check_dim(d: int) -> int:
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d}")
    return int(d)


@dataclass(frozen=True)
class BellLabel:
    k: int
    l: int
    d: int

    def __post_init__(self):
        _check_dim(self.d)
        if not (0 <= self.k < self.d and 0 <= self.l < self.d):
            raise ValueError(f"label ({self.k}, {self.l}) out of range for d={self.d}")

    @property
    def index(self) -> int:
        """Flat index ``d*l + k``, the apparatus basis state recording this label."""
        return self.d * self.l + self.k

    @classmethod
    def from_index(cls, d: int, nu: int) -> "BellLabel":
        return cls(nu % d, nu // d, d)

    @classmethod
    def all(cls, d: int):
        return [cls(k, l, d) for l in range(d) for k in range(d)]


def _single(d: int) -> RegisterShape:
    return RegisterShape((d,))


def shift_x(d: int) -> Operator:
    d = _check_dim(d)
    return Operator(_single(d), np.roll(np.eye(d), 1, axis=0))


def phase_z(d: int) -> Operator:
    d = _check_dim(d)
    return Operator(_single(d), np.diag(omega(d) ** np.arange(d)))


def fourier_state(d: int, k: int) -> PureState:
    d = _check_dim(d)
    if not 0 <= k < d:
        raise ValueError(f"k={k} out of range for d={d}")
    return PureState(_single(d), omega(d) ** (k * np.arange(d)) / np.sqrt(d))


def cshift(d: int, direction: int) -> Operator:
    """Controlled shift on (control, target): ``|c>|t> -> |c>|t + direction*c>``."""
    d = _check_dim(d)
    if direction not in (1, -1):
        raise ValueError(f"direction must be +1 or -1, got {direction}")
    mat = np.zeros((d * d, d * d))
    for c in range(d):
        for t in range(d):
            mat[c * d + (t + direction * c) % d, c * d + t] = 1.0
    return Operator(RegisterShape((d, d)), mat)


def bell_state(d: int, label: BellLabel) -> PureState:
    d = _check_dim(d)
    _match(d, label)
    amp = np.zeros((d, d), dtype=complex)
    w = omega(d)
    for i in range(d):
        amp[(label.l + i) % d, i] = w ** (i * label.k)
    return PureState(RegisterShape((d, d)), amp.ravel() / np.sqrt(d))


def bell_basis(d: int) -> Operator:
    """Unitary whose column ``d*l + k`` is ``bell_state(d, (k, l))``."""
    cols = [bell_state(d, lab).amp for lab in BellLabel.all(d)]
    return Operator(RegisterShape((d, d)), np.column_stack(cols))


def chi_state(d: int, label: BellLabel, input: PureState) -> PureState:
    """State left on the receiving site when the Bell outcome is ``label``:
    ``sum_i alpha_{l+i} omega^{-ik} |i>``."""
    d = _check_dim(d)
    _match(d, label)
    if input.dims != (d,):
        raise ValueError(f"expected a single site of dimension {d}, got {input.dims}")
    i = np.arange(d)
    amp = input.amp[(label.l + i) % d] * omega(d) ** (-i * label.k)
    return PureState(_single(d), amp)


def correction_weyl(d: int, label: BellLabel) -> Operator:
    """``X^l Z^k``; undoes chi_state for the same label."""
    _match(d, label)
    return shift_x(d) ** label.l @ phase_z(d) ** label.k


def alice_normalizer(d: int, label: BellLabel) -> Operator:
    """Two-site ``U^l (x) (Z^dag)^k`` with ``U`` the shift-down operator.

    Sends ``|l> (x) fourier_state(d, k)`` to ``|0> (x) fourier_state(d, 0)``.
    """
    _match(d, label)
    down = shift_x(d).dag() ** label.l
    phase = phase_z(d).dag() ** label.k
    return Operator(RegisterShape((d, d)), np.kron(down.mat, phase.mat))


def _match(d: int, label: BellLabel) -> None:
    if label.d != d:
        raise ValueError(f"label for d={label.d} used with d={d}")
