"""Statevector kernels.

Every kernel acts in place on a flat complex128 amplitude array whose index
bits are the global qubit positions (bit 0 = least significant).  Control
conditions are given as ``(mask, value)``: a basis index ``i`` satisfies the
condition when ``i & mask == value``.  Targets are single-bit masks.

Two implementations are kept side by side: numba-compiled loops and a pure
numpy path.  The numba path is used unless numba is unavailable or the
environment variable ``QMATOPS_DISABLE_NUMBA`` is set to a truthy value.
"""

from __future__ import annotations

import math
import os

import numpy as np

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _env_disabled() -> bool:
    return os.environ.get("QMATOPS_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


# ---------------------------------------------------------------------------
# numpy path


def mcx_numpy(amps: np.ndarray, ctrl_mask: int, ctrl_value: int, target: int) -> None:
    idx = np.arange(amps.size, dtype=np.int64)
    lo = idx[((idx & ctrl_mask) == ctrl_value) & ((idx & target) == 0)]
    hi = lo | target
    amps[lo], amps[hi] = amps[hi], amps[lo]


def cswap_numpy(amps: np.ndarray, ctrl_mask: int, ctrl_value: int, bit_a: int, bit_b: int) -> None:
    idx = np.arange(amps.size, dtype=np.int64)
    src = idx[((idx & ctrl_mask) == ctrl_value) & ((idx & bit_a) != 0) & ((idx & bit_b) == 0)]
    dst = src ^ (bit_a | bit_b)
    amps[src], amps[dst] = amps[dst], amps[src]


def hadamard_numpy(amps: np.ndarray, bit: int) -> None:
    view = amps.reshape(-1, 2, bit)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :].copy()
    view[:, 0, :] = (a0 + a1) * _INV_SQRT2
    view[:, 1, :] = (a0 - a1) * _INV_SQRT2


def mass_numpy(amps: np.ndarray, mask: int, value: int) -> float:
    idx = np.arange(amps.size, dtype=np.int64)
    sel = amps[(idx & mask) == value]
    return float(np.sum(sel.real * sel.real + sel.imag * sel.imag))


# ---------------------------------------------------------------------------
# numba path

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None

if njit is not None:

    @njit(cache=True, nogil=True)
    def mcx_numba(amps, ctrl_mask, ctrl_value, target):
        for i in range(amps.size):
            if (i & target) == 0 and (i & ctrl_mask) == ctrl_value:
                j = i | target
                tmp = amps[i]
                amps[i] = amps[j]
                amps[j] = tmp

    @njit(cache=True, nogil=True)
    def cswap_numba(amps, ctrl_mask, ctrl_value, bit_a, bit_b):
        flip = bit_a | bit_b
        for i in range(amps.size):
            if (i & bit_a) != 0 and (i & bit_b) == 0 and (i & ctrl_mask) == ctrl_value:
                j = i ^ flip
                tmp = amps[i]
                amps[i] = amps[j]
                amps[j] = tmp

    @njit(cache=True, nogil=True)
    def hadamard_numba(amps, bit):
        s = 0.7071067811865476
        for i in range(amps.size):
            if (i & bit) == 0:
                j = i | bit
                a0 = amps[i]
                a1 = amps[j]
                amps[i] = (a0 + a1) * s
                amps[j] = (a0 - a1) * s

    @njit(cache=True, nogil=True)
    def mass_numba(amps, mask, value):
        total = 0.0
        for i in range(amps.size):
            if (i & mask) == value:
                a = amps[i]
                total += a.real * a.real + a.imag * a.imag
        return total

    HAVE_NUMBA = True
else:  # pragma: no cover
    mcx_numba = cswap_numba = hadamard_numba = mass_numba = None
    HAVE_NUMBA = False


NUMPY_KERNELS = {
    "mcx": mcx_numpy,
    "cswap": cswap_numpy,
    "hadamard": hadamard_numpy,
    "mass": mass_numpy,
}
NUMBA_KERNELS = {
    "mcx": mcx_numba,
    "cswap": cswap_numba,
    "hadamard": hadamard_numba,
    "mass": mass_numba,
}

BACKEND = "numba" if HAVE_NUMBA and not _env_disabled() else "numpy"
_ACTIVE = NUMBA_KERNELS if BACKEND == "numba" else NUMPY_KERNELS

mcx = _ACTIVE["mcx"]
cswap = _ACTIVE["cswap"]
hadamard = _ACTIVE["hadamard"]
mass = _ACTIVE["mass"]


def warmup() -> None:
    """Trigger compilation of the active kernels on a tiny array."""
    amps = np.zeros(4, dtype=np.complex128)
    amps[0] = 1.0
    mcx(amps, 1, 1, 2)
    cswap(amps, 0, 0, 1, 2)
    hadamard(amps, 1)
    mass(amps, 1, 0)
