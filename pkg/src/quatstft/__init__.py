"""Quaternion short-time Fourier transform via the slice Segal-Bargmann transform."""
from .quaternion import (
    ImaginaryUnit,
    NonOrthogonalUnits,
    Quaternion,
    SliceComplex,
    UNIT_I,
    UNIT_J,
    UNIT_K,
    check_orthogonal,
    slice_decompose,
    slice_exp,
    slice_recompose,
    symplectic_split,
)
from .quadrature import (
    BadGridSpec,
    GridMismatch,
    LineGrid,
    PlaneGrid,
    SampledSignal,
    default_plane_grid,
    default_time_grid,
    inner_fock,
    inner_l2,
    make_grid,
)
from .basis import bargmann_kernel, fock_monomial, hermite_h, hermite_norm, hermite_psi, hermite_table
from .bargmann import (
    CoefficientSequence,
    SchwartzReport,
    TruncationRisk,
    bargmann_coefficients,
    bargmann_transform,
    inverse_bargmann,
    momentum_equivalence_residual,
    position_equivalence_residual,
    schwartz_decay_report,
    slice_derivative,
)
from .qft import QftPlan, convolve, modulate, qft_eigenvalues, qft_forward, qft_inverse, translate
from .qstft import (
    BadExponent,
    TimeFreqGrid,
    concentration_check,
    fourier_intertwine_residual,
    gabor_kernel,
    gaussian_window,
    lieb_functional,
    qstft_adjoint,
    qstft_bargmann,
    qstft_grid,
    qstft_reconstruct,
    qstft_windowed,
)
from .verify import run_suite

__version__ = "0.1.0"
