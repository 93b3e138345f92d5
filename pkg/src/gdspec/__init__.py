"""Generalized distance spectra of distance-regular graphs and their products."""

import os as _os

# GDSPEC_THREADS caps BLAS threads; it only takes effect before numpy loads
if _os.environ.get("GDSPEC_THREADS"):
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _os.environ["GDSPEC_THREADS"])

from gdspec.drg import (
    IntersectionArray,
    PolynomialFamily,
    ShellSizes,
    SpectralPolynomial,
    SpectralPolynomialSet,
    SpectralTable,
    build_q_matrix,
    eigenvalue_for_f,
    eigenvalues,
    p_polynomials,
    shell_sizes,
    spectral_polynomials,
    spectral_table,
)
from gdspec.families import FamilySpec, parse_family

__version__ = "0.1.0"

__all__ = [
    "FamilySpec",
    "IntersectionArray",
    "PolynomialFamily",
    "ShellSizes",
    "SpectralPolynomial",
    "SpectralPolynomialSet",
    "SpectralTable",
    "build_q_matrix",
    "eigenvalue_for_f",
    "eigenvalues",
    "p_polynomials",
    "parse_family",
    "shell_sizes",
    "spectral_polynomials",
    "spectral_table",
]
