"""Statevector circuits for Hadamard and Kronecker products and elementary
column transformations of amplitude-encoded matrices."""

from .algorithms import AlgorithmResult, column_add, column_swap, hadamard_product, kronecker_product
from .errors import (
    ColumnIndexOutOfRange,
    DimensionMismatch,
    DuplicateRegisterName,
    EqualColumns,
    NonPowerOfTwo,
    OverlappingSupport,
    PostSelectionImpossible,
    QubitCapExceeded,
    ResidualEntanglement,
    UnknownRegister,
    ValidationError,
    ValueOutOfRange,
    WidthMismatch,
    ZeroMatrix,
)
from .gates import GateStats
from .kernels import BACKEND
from .qstate import EncodedMatrix, QState, RegisterLayout, decode_matrix, encode_matrix

__version__ = "0.1.0"

__all__ = [
    "AlgorithmResult",
    "BACKEND",
    "ColumnIndexOutOfRange",
    "DimensionMismatch",
    "DuplicateRegisterName",
    "EncodedMatrix",
    "EqualColumns",
    "GateStats",
    "NonPowerOfTwo",
    "OverlappingSupport",
    "PostSelectionImpossible",
    "QState",
    "QubitCapExceeded",
    "RegisterLayout",
    "ResidualEntanglement",
    "UnknownRegister",
    "ValidationError",
    "ValueOutOfRange",
    "WidthMismatch",
    "ZeroMatrix",
    "column_add",
    "column_swap",
    "decode_matrix",
    "encode_matrix",
    "hadamard_product",
    "kronecker_product",
]
