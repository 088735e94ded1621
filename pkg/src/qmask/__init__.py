"""Qudit state-vector toolkit for teleportation-based quantum information masking."""

from .core import (
    DensityMatrix,
    MeasurementRecord,
    Operator,
    PureState,
    RegisterShape,
    apply_local,
    basis_state,
    fidelity_pure,
    make_state,
    measure_site,
    partial_trace,
    random_state,
    tensor,
    trace_distance,
)
from .gates import (
    BellLabel,
    alice_normalizer,
    bell_state,
    chi_state,
    correction_weyl,
    cshift,
    fourier_state,
    phase_z,
    shift_x,
)
from .maskers import (
    MaskScheme,
    NotInRangeError,
    SchemeId,
    mask,
    mask_four,
    mask_four_heavy,
    mask_four_literal_qutrit,
    mask_three,
    unmask,
    unmask_four,
    unmask_four_heavy,
    unmask_three,
    unmask_three_to,
)
from .teleport import bell_decomposition_residual, teleport
from .verify import VerificationReport, masking_report, no_masking_demo, step1_rho1_check

__version__ = "0.1.0"
