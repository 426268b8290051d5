"""Density ridge estimation and asymptotic confidence regions."""

from ridgecr._core import (  # noqa: F401
    DensityModel,
    KernelConstants,
    KernelSpec,
    NumericError,
    PreconditionError,
    b_h_threshold,
    find_ridge,
    kde_pack,
    kernel_constants,
    omega_closed_form,
    z_alpha,
)

__all__ = [
    "DensityModel",
    "KernelConstants",
    "KernelSpec",
    "NumericError",
    "PreconditionError",
    "b_h_threshold",
    "find_ridge",
    "kde_pack",
    "kernel_constants",
    "omega_closed_form",
    "z_alpha",
]
