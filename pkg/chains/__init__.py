"""Partition functions, skew-orthogonal families, kernels and correlations."""

from chains.partition import build_moment_matrices, z_pfaffian, z_bruteforce
from chains.skeworth import SkewOrthFamily, InverseMatrix, construct_family, invert_w
from chains.kernel import (
    kernel_entries,
    kernel_matrix,
    assemble_tw_matrices,
    generating_check,
)
from chains.correlation import (
    correlation_hermitian,
    correlation_asymmetric,
    correlation_bruteforce,
)

__all__ = [
    "build_moment_matrices",
    "z_pfaffian",
    "z_bruteforce",
    "SkewOrthFamily",
    "InverseMatrix",
    "construct_family",
    "invert_w",
    "kernel_entries",
    "kernel_matrix",
    "assemble_tw_matrices",
    "generating_check",
    "correlation_hermitian",
    "correlation_asymmetric",
    "correlation_bruteforce",
]
