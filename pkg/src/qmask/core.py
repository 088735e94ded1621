"""Dense qudit state vectors: construction, local operators, partial trace,
projective measurement and the two metrics used by the masking checks.

Amplitudes are stored row-major over the register dimensions with site 0 the
most significant index, so the basis ket ``|i0 i1 ... i_{n-1}>`` sits at the
flat index ``np.ravel_multi_index((i0, ..., i_{n-1}), dims)``.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MAX_DIM = 10**6
# eigen/singular values this close to zero are treated as zero
CLAMP_TOL = 1e-10
MIN_OUTCOME_PROB = 1e-15


class NormalizationWarning(UserWarning):
    """Raised (as a warning) when make_state had to rescale its input."""


def max_dim() -> int:
    """Dense-dimension cap, overridable through ``QMASK_MAX_DIM``."""
    raw = os.environ.get("QMASK_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"QMASK_MAX_DIM must be an integer, got {raw!r}") from exc
    if cap < 2:
        raise ValueError("QMASK_MAX_DIM must be >= 2")
    return cap


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RegisterShape:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        if not dims:
            raise ValueError("a register needs at least one site")
        if any(x < 2 for x in dims):
            raise ValueError(f"site dimensions must be >= 2, got {dims}")
        total = math.prod(dims)
        if total > max_dim():
            raise ValueError(f"total dimension {total} exceeds cap {max_dim()}")
        object.__setattr__(self, "dims", dims)

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    @property
    def n_sites(self) -> int:
        return len(self.dims)

    def __add__(self, other: "RegisterShape") -> "RegisterShape":
        return RegisterShape(self.dims + other.dims)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)

    def __getitem__(self, i):
        return self.dims[i]


def as_shape(shape: RegisterShape | Sequence[int]) -> RegisterShape:
    return shape if isinstance(shape, RegisterShape) else RegisterShape(tuple(shape))


@dataclass(frozen=True)
class PureState:
    """Unit-norm amplitude vector over a register."""

    shape: RegisterShape
    amp: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "shape", as_shape(self.shape))
        amp = _frozen(np.ravel(self.amp))
        if amp.size != self.shape.size:
            raise ValueError(
                f"{amp.size} amplitudes do not fit register {self.shape.dims}"
            )
        if abs(np.linalg.norm(amp) - 1.0) > 1e-12:
            raise ValueError("PureState amplitudes must be normalized; use make_state")
        object.__setattr__(self, "amp", amp)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.shape.dims

    def tensor_view(self) -> np.ndarray:
        return self.amp.reshape(self.dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))


@dataclass(frozen=True)
class DensityMatrix:
    dims: tuple[int, ...]
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = _frozen(self.mat)
        dim = math.prod(self.dims)
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {self.dims}")
        if np.max(np.abs(mat - mat.conj().T)) > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(mat) - 1.0) > 1e-10:
            raise ValueError("density matrix does not have unit trace")
        eig = np.linalg.eigvalsh(mat)
        eig = np.where(np.abs(eig) < CLAMP_TOL, 0.0, eig)
        if eig.min() < -1e-9:
            raise ValueError("density matrix is not positive semidefinite")
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def maximally_mixed(cls, dims: int | Sequence[int]) -> "DensityMatrix":
        dims = (dims,) if isinstance(dims, int) else tuple(dims)
        n = math.prod(dims)
        return cls(dims, np.eye(n) / n)

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityMatrix":
        return cls(state.dims, np.outer(state.amp, state.amp.conj()))


@dataclass(frozen=True)
class Operator:
    """Square matrix acting on a sub-register described by ``arity_shape``."""

    arity_shape: RegisterShape
    mat: np.ndarray = field(repr=False)
    unitary_flag: bool = True

    def __post_init__(self):
        shape = as_shape(self.arity_shape)
        mat = _frozen(self.mat)
        n = shape.size
        if mat.shape != (n, n):
            raise ValueError(f"operator matrix {mat.shape} does not act on {shape.dims}")
        if self.unitary_flag and np.max(np.abs(mat.conj().T @ mat - np.eye(n))) > 1e-10:
            raise ValueError("operator flagged unitary but U^dag U != I")
        object.__setattr__(self, "arity_shape", shape)
        object.__setattr__(self, "mat", mat)

    def dag(self) -> "Operator":
        return Operator(self.arity_shape, self.mat.conj().T, self.unitary_flag)

    def __matmul__(self, other: "Operator") -> "Operator":
        if self.arity_shape != other.arity_shape:
            raise ValueError("cannot compose operators on different registers")
        return Operator(
            self.arity_shape, self.mat @ other.mat, self.unitary_flag and other.unitary_flag
        )

    def __pow__(self, n: int) -> "Operator":
        if n < 0:
            return self.dag() ** (-n)
        return Operator(
            self.arity_shape, np.linalg.matrix_power(self.mat, n), self.unitary_flag
        )


@dataclass(frozen=True)
class MeasurementRecord:
    site: int
    outcome: int
    probability: float
    post_state: PureState


def make_state(shape: RegisterShape | Sequence[int], amplitudes: Iterable[complex]) -> PureState:
    """Build a normalized state; rescaling by more than 1e-6 emits a NormalizationWarning."""
    shape = as_shape(shape)
    amp = np.asarray(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes,
                     dtype=complex).ravel()
    if amp.size != shape.size:
        raise ValueError(f"expected {shape.size} amplitudes, got {amp.size}")
    if not np.all(np.isfinite(amp)):
        raise ValueError("amplitudes must be finite")
    nrm = np.linalg.norm(amp)
    if nrm == 0:
        raise ValueError("cannot normalize the zero vector")
    if abs(nrm - 1.0) > 1e-6:
        warnings.warn(f"input norm {nrm:.6g} rescaled to 1", NormalizationWarning, stacklevel=2)
    return PureState(shape, amp / nrm)


def basis_state(shape: RegisterShape | Sequence[int], index: int | Sequence[int]) -> PureState:
    shape = as_shape(shape)
    flat = index if isinstance(index, (int, np.integer)) else np.ravel_multi_index(tuple(index), shape.dims)
    amp = np.zeros(shape.size, dtype=complex)
    amp[int(flat)] = 1.0
    return PureState(shape, amp)


def random_state(shape: RegisterShape | Sequence[int], rng: np.random.Generator) -> PureState:
    """Haar-random pure state from i.i.d. standard complex Gaussian amplitudes."""
    shape = as_shape(shape)
    z = rng.standard_normal(shape.size) + 1j * rng.standard_normal(shape.size)
    return PureState(shape, z / np.linalg.norm(z))


def tensor(*states: PureState) -> PureState:
    if not states:
        raise ValueError("tensor needs at least one state")
    shape = states[0].shape
    amp = states[0].amp
    for s in states[1:]:
        shape = shape + s.shape  # raises on dimension overflow
        amp = np.kron(amp, s.amp)
    return PureState(shape, amp / np.linalg.norm(amp))


def _check_sites(n_sites: int, sites: Sequence[int]) -> tuple[int, ...]:
    sites = tuple(int(s) for s in sites)
    if len(set(sites)) != len(sites):
        raise ValueError(f"repeated site in {sites}")
    for s in sites:
        if not 0 <= s < n_sites:
            raise ValueError(f"site {s} out of range for {n_sites}-site register")
    return sites


def apply_local(state: PureState, op: Operator, sites: Sequence[int]) -> PureState:
    """Apply ``op`` to the listed sites (in that order), identity elsewhere."""
    sites = _check_sites(state.shape.n_sites, sites)
    local_dims = tuple(state.dims[s] for s in sites)
    if local_dims != op.arity_shape.dims:
        raise ValueError(f"operator acts on {op.arity_shape.dims}, sites have {local_dims}")
    k = len(sites)
    psi = state.tensor_view()
    gate = op.mat.reshape(local_dims + local_dims)
    # contract gate inputs with the chosen axes; outputs land in front
    out = np.tensordot(gate, psi, axes=(list(range(k, 2 * k)), list(sites)))
    out = np.moveaxis(out, list(range(k)), list(sites))
    amp = out.ravel()
    if not op.unitary_flag:
        nrm = np.linalg.norm(amp)
        if nrm == 0:
            raise ValueError("operator annihilated the state")
        amp = amp / nrm
    return PureState(state.shape, amp)


def partial_trace(state: PureState, keep: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix on ``keep``; kept sites appear in the order given."""
    keep = _check_sites(state.shape.n_sites, keep)
    if not keep:
        raise ValueError("keep set must be nonempty")
    rest = [s for s in range(state.shape.n_sites) if s not in keep]
    psi = np.transpose(state.tensor_view(), list(keep) + rest)
    dk = math.prod(state.dims[s] for s in keep)
    m = psi.reshape(dk, -1)
    rho = m @ m.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(tuple(state.dims[s] for s in keep), rho)


def site_probabilities(state: PureState, site: int) -> np.ndarray:
    """Born probabilities of a computational-basis measurement on one site."""
    (site,) = _check_sites(state.shape.n_sites, [site])
    p = np.abs(np.moveaxis(state.tensor_view(), site, 0).reshape(state.dims[site], -1)) ** 2
    return p.sum(axis=1)


def measure_site(
    state: PureState,
    site: int,
    rng: np.random.Generator | None = None,
    force: int | None = None,
) -> MeasurementRecord:
    """Projective measurement of one site in the computational basis.

    Either samples the outcome from ``rng`` or, with ``force``, conditions on
    the given outcome. The site is kept in the register, collapsed onto the
    measured basis state.
    """
    probs = site_probabilities(state, site)
    if force is None:
        if rng is None:
            raise ValueError("measure_site needs an rng unless an outcome is forced")
        allowed = np.where(probs >= MIN_OUTCOME_PROB, probs, 0.0)
        outcome = int(rng.choice(len(probs), p=allowed / allowed.sum()))
    else:
        outcome = int(force)
        if not 0 <= outcome < len(probs):
            raise ValueError(f"outcome {outcome} out of range")
        if probs[outcome] < MIN_OUTCOME_PROB:
            raise ValueError(f"outcome {outcome} has probability {probs[outcome]:.3g}")
    psi = np.moveaxis(state.tensor_view(), site, 0)
    proj = np.zeros_like(psi)
    proj[outcome] = psi[outcome]
    amp = np.moveaxis(proj, 0, site).ravel()
    post = PureState(state.shape, amp / np.linalg.norm(amp))
    return MeasurementRecord(site, outcome, float(probs[outcome]), post)


def extract_site(state: PureState, site: int, rest: PureState, tol: float = 1e-8) -> PureState:
    """Return the factor on ``site`` assuming the others are in ``rest``.

    ``rest`` is the expected state of the remaining sites in ascending order.
    Raises if the state is not (within ``tol`` in residual norm) of the form
    ``factor (x) rest``.
    """
    (site,) = _check_sites(state.shape.n_sites, [site])
    others = [s for s in range(state.shape.n_sites) if s != site]
    if rest.dims != tuple(state.dims[s] for s in others):
        raise ValueError("residual reference does not match the other sites")
    psi = np.moveaxis(state.tensor_view(), site, 0).reshape(state.dims[site], -1)
    v = psi @ rest.amp.conj()
    residual = float(np.linalg.norm(psi - np.outer(v, rest.amp)))
    if residual > tol:
        raise ValueError(f"state is not a product with the reference (residual {residual:.3g})")
    return PureState(RegisterShape((state.dims[site],)), v / np.linalg.norm(v))


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    if a.mat.shape != b.mat.shape:
        raise ValueError(f"dimension mismatch {a.dim} vs {b.dim}")
    sv = np.linalg.svd(a.mat - b.mat, compute_uv=False)
    return float(0.5 * sv.sum())


def fidelity_pure(a: PureState, b: PureState) -> float:
    if a.dims != b.dims:
        raise ValueError(f"shape mismatch {a.dims} vs {b.dims}")
    return float(abs(np.vdot(a.amp, b.amp)) ** 2)


def fidelity_mixed(pure: PureState, rho: DensityMatrix) -> float:
    """<psi|rho|psi> for a pure reference and a density matrix of equal size."""
    if rho.dim != pure.shape.size:
        raise ValueError("dimension mismatch")
    return float(np.vdot(pure.amp, rho.mat @ pure.amp).real)
