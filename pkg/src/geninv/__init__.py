"""Moore-Penrose, unit-consistent and mixed generalized inverses, with
resolved-rate kinematics experiments that exercise their consistency laws."""

from .balance import BalanceSettings, ScaleDecomposition, scale_decompose
from .estimators import GeneralizedInverse, MatrixBalancer
from .inverses import (
    BlockPartition,
    InverseKind,
    check_rotation_consistency,
    check_unit_consistency,
    generalized_inverse,
    mixed_inverse,
    uc_inverse,
)
from .matrix import InvalidInputError, diag_from, kron, pinv, rotation_embed, svd

__version__ = "0.1.0"

__all__ = [
    "BalanceSettings",
    "BlockPartition",
    "GeneralizedInverse",
    "InvalidInputError",
    "InverseKind",
    "MatrixBalancer",
    "ScaleDecomposition",
    "check_rotation_consistency",
    "check_unit_consistency",
    "diag_from",
    "generalized_inverse",
    "kron",
    "mixed_inverse",
    "pinv",
    "rotation_embed",
    "scale_decompose",
    "svd",
    "uc_inverse",
]
