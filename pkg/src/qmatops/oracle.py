"""Classical reference implementations used as ground truth.

Nothing here touches the statevector code: these are plain entrywise and
block-matrix computations on complex arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ColumnIndexOutOfRange, DimensionMismatch, EqualColumns, ZeroMatrix
from .qstate import as_matrix

ALGORITHMS = ("hadamard", "kron", "col-add", "col-swap")


def normalize_frobenius(a) -> tuple[np.ndarray, float]:
    a = as_matrix(a)
    scale = math.sqrt(sum(abs(x) ** 2 for x in a.reshape(-1)))
    if scale == 0.0:
        raise ZeroMatrix("matrix is identically zero")
    return a / scale, scale


def classical_hadamard(a, b) -> np.ndarray:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch(f"Hadamard product needs equal shapes, got {a.shape} and {b.shape}")
    out = np.empty_like(a)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            out[i, j] = a[i, j] * b[i, j]
    return out


def classical_kronecker(a, b) -> np.ndarray:
    """Block matrix whose (i, j) block is ``a[i, j] * b``."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    p, q = b.shape
    out = np.zeros((a.shape[0] * p, a.shape[1] * q), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            out[i * p:(i + 1) * p, j * q:(j + 1) * q] = a[i, j] * b
    return out


def _check_columns(a: np.ndarray, k: int, l: int) -> None:
    cols = a.shape[1]
    for name, idx in (("k", k), ("l", l)):
        if not 0 <= idx < cols:
            raise ColumnIndexOutOfRange(f"{name}={idx} outside 0..{cols - 1}")
    if k == l:
        raise EqualColumns(f"k and l must differ (both {k})")


def classical_column_add(a, k: int, l: int) -> np.ndarray:
    """Column ``l`` becomes column ``l`` plus column ``k``."""
    a = np.array(a, dtype=complex)
    _check_columns(a, k, l)
    a[:, l] = a[:, l] + a[:, k]
    return a


def classical_column_swap(a, k: int, l: int) -> np.ndarray:
    a = np.array(a, dtype=complex)
    _check_columns(a, k, l)
    a[:, [k, l]] = a[:, [l, k]]
    return a


def _fro2(a: np.ndarray) -> float:
    return float(np.sum(np.abs(a) ** 2))


def expected_probability(algorithm: str, a, b=None, k: int | None = None, l: int | None = None) -> float:
    """Closed-form post-selection probability, from normalized classical entries."""
    if algorithm == "hadamard":
        an, _ = normalize_frobenius(a)
        bn, _ = normalize_frobenius(b)
        g2 = _fro2(classical_hadamard(an, bn))
        n_plus_m = int(math.log2(an.shape[0] * an.shape[1]))
        return g2 / 2**n_plus_m
    if algorithm == "kron":
        normalize_frobenius(a)
        normalize_frobenius(b)
        return 1.0
    if algorithm == "col-add":
        an, _ = normalize_frobenius(a)
        return _fro2(classical_column_add(an, k, l)) / 8.0
    if algorithm == "col-swap":
        an, _ = normalize_frobenius(a)
        _check_columns(an, k, l)
        return 1.0 / 24.0
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def expected_output(algorithm: str, a, b=None, k: int | None = None, l: int | None = None) -> np.ndarray:
    """Classical result on the Frobenius-normalized inputs (not renormalized)."""
    an, _ = normalize_frobenius(a)
    if algorithm == "hadamard":
        return classical_hadamard(an, normalize_frobenius(b)[0])
    if algorithm == "kron":
        return classical_kronecker(an, normalize_frobenius(b)[0])
    if algorithm == "col-add":
        return classical_column_add(an, k, l)
    if algorithm == "col-swap":
        return classical_column_swap(an, k, l)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


@dataclass(frozen=True)
class OracleReport:
    expected: np.ndarray
    rescale_factor: float
    max_abs_diff: float
    probability_expected: float
    probability_observed: float

    @property
    def probability_diff(self) -> float:
        return abs(self.probability_observed - self.probability_expected)

    def passed(self, matrix_tol: float = 1e-9, prob_tol: float = 1e-10) -> bool:
        return self.max_abs_diff < matrix_tol and self.probability_diff < prob_tol


def compare(decoded, expected, probability_observed: float, probability_expected: float) -> OracleReport:
    """Rescale ``decoded`` by the positive ratio of Frobenius norms and diff it
    against ``expected``.

    A positive real factor suffices because every gate in these circuits is a
    real matrix, so no global phase can appear.
    """
    decoded = np.asarray(decoded, dtype=complex)
    expected = np.asarray(expected, dtype=complex)
    if decoded.shape != expected.shape:
        raise DimensionMismatch(f"decoded shape {decoded.shape} != expected {expected.shape}")
    nd, ne = np.linalg.norm(decoded), np.linalg.norm(expected)
    factor = float(ne / nd) if nd > 0 else 0.0
    diff = float(np.max(np.abs(decoded * factor - expected)))
    return OracleReport(expected, factor, diff, float(probability_expected), float(probability_observed))
