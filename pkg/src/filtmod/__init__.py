"""Exact rational toolkit for filtered-module classification, constituent
skeletons, and flag recovery."""

from .coxeter import Permutation
from .linalg import Matrix, Subspace
from .phimodule import (
    FilteredPhiModule,
    Refinement,
    SubsetI,
    random_module,
    validate,
)
from .reconstruct import RecoveryInput, recover_filtration, roundtrip
from .skeleton import PiSkeleton, build_pi, build_pi_flat, build_pi_S
from .tmap import TOperatorSet, classify, t_kernel

__all__ = [
    "Permutation",
    "Matrix",
    "Subspace",
    "FilteredPhiModule",
    "Refinement",
    "SubsetI",
    "random_module",
    "validate",
    "RecoveryInput",
    "recover_filtration",
    "roundtrip",
    "PiSkeleton",
    "build_pi",
    "build_pi_flat",
    "build_pi_S",
    "TOperatorSet",
    "classify",
    "t_kernel",
]

__version__ = "1.0.0"
