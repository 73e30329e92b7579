"""Radon and Hough transforms on a shared parameter grid."""

from ._radhough import (
    ContractViolation,
    ConvergenceError,
    Discretization,
    DomainError,
    FormatError,
    Sinogram,
    SingularInputError,
    __version__,
    add_noise,
    backproject,
    detect_peaks,
    evaluate,
    fbp,
    hough_counter,
    hough_invert,
    radon,
    radon_square,
    shepp_logan,
    shepp_logan_mask,
)

__all__ = [
    "ContractViolation",
    "ConvergenceError",
    "Discretization",
    "DomainError",
    "FormatError",
    "Sinogram",
    "SingularInputError",
    "__version__",
    "add_noise",
    "backproject",
    "detect_peaks",
    "evaluate",
    "fbp",
    "hough_counter",
    "hough_invert",
    "radon",
    "radon_square",
    "shepp_logan",
    "shepp_logan_mask",
]
