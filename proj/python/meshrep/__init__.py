"""Adaptive triangular mesh image representation."""

from ._meshrep import (
    DimensionError,
    Error,
    IoError,
    Mesh,
    ParameterError,
    psnr,
    read_image,
    reconstruct,
    represent,
    sample_density,
    synthetic,
    synthetic_names,
    write_pgm,
)

__all__ = [
    "DimensionError",
    "Error",
    "IoError",
    "Mesh",
    "ParameterError",
    "psnr",
    "read_image",
    "reconstruct",
    "represent",
    "sample_density",
    "synthetic",
    "synthetic_names",
    "write_pgm",
]
