"""Register layouts, statevectors and amplitude encoding of matrices.

Index convention: the first declared register holds the most significant
bits of the global basis index, and inside a register qubit ``j`` (1-based)
is the ``j``-th most significant bit of the register value.  For a layout
``[(R, n), (C, m)]`` the basis state ``|s>_R |t>_C`` therefore sits at index
``s * 2**m + t``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateRegisterName,
    NonPowerOfTwo,
    QubitCapExceeded,
    ResidualEntanglement,
    UnknownRegister,
    ValidationError,
    ValueOutOfRange,
    ZeroMatrix,
)

NORM_TOL = 1e-10
RESIDUAL_TOL = 1e-10

_max_qubits = int(os.environ.get("QMATOPS_MAX_QUBITS", "24"))


def max_qubits() -> int:
    return _max_qubits


def set_max_qubits(n: int) -> int:
    """Change the simulated-width cap; returns the previous value."""
    global _max_qubits
    if n < 1:
        raise ValueError("qubit cap must be positive")
    old, _max_qubits = _max_qubits, int(n)
    return old


@dataclass(frozen=True)
class RegisterLayout:
    registers: tuple[tuple[str, int], ...]

    def __post_init__(self):
        regs = tuple((str(name), int(width)) for name, width in self.registers)
        names = [name for name, _ in regs]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DuplicateRegisterName(f"duplicate register names: {dupes}")
        for name, width in regs:
            if width < 1:
                raise ValidationError(f"register {name!r} must have width >= 1, got {width}")
        object.__setattr__(self, "registers", regs)

    @classmethod
    def of(cls, *registers: tuple[str, int]) -> RegisterLayout:
        return cls(tuple(registers))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.registers)

    @property
    def total_width(self) -> int:
        return sum(width for _, width in self.registers)

    @property
    def dim(self) -> int:
        return 1 << self.total_width

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def _position(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownRegister(f"unknown register {name!r}; layout has {list(self.names)}") from None

    def width(self, name: str) -> int:
        return self.registers[self._position(name)][1]

    def shift(self, name: str) -> int:
        """Bit offset of the register's least significant qubit."""
        pos = self._position(name)
        return sum(width for _, width in self.registers[pos + 1:])

    def qubit_bit(self, name: str, j: int) -> int:
        """Global bit position of qubit ``j`` (1-based, most significant first)."""
        w = self.width(name)
        if not 1 <= j <= w:
            raise ValueOutOfRange(f"qubit index {j} outside 1..{w} of register {name!r}")
        return self.shift(name) + (w - j)

    def register_mask(self, name: str) -> int:
        return ((1 << self.width(name)) - 1) << self.shift(name)

    def check_value(self, name: str, value: int) -> None:
        w = self.width(name)
        if not 0 <= value < (1 << w):
            raise ValueOutOfRange(f"value {value} does not fit register {name!r} of width {w}")

    def condition_mask(self, conditions: Iterable[tuple[str, int]]) -> tuple[int, int]:
        """Combine (register, value) pairs into one ``(mask, value)`` test."""
        mask = value = 0
        for name, v in conditions:
            self.check_value(name, v)
            shift = self.shift(name)
            mask |= self.register_mask(name)
            value |= int(v) << shift
        return mask, value

    def index_of(self, values: Mapping[str, int]) -> int:
        missing = set(self.names) - set(values)
        if missing:
            raise ValidationError(f"no value given for registers {sorted(missing)}")
        extra = set(values) - set(self.names)
        if extra:
            raise UnknownRegister(f"unknown registers {sorted(extra)}")
        return self.condition_mask(values.items())[1]

    def values_of(self, index: int) -> dict[str, int]:
        return {name: (index >> self.shift(name)) & ((1 << w) - 1) for name, w in self.registers}

    def appended(self, name: str, width: int) -> RegisterLayout:
        return RegisterLayout(self.registers + ((name, width),))

    def without(self, name: str) -> RegisterLayout:
        pos = self._position(name)
        return RegisterLayout(self.registers[:pos] + self.registers[pos + 1:])

    def concat(self, other: RegisterLayout) -> RegisterLayout:
        clash = set(self.names) & set(other.names)
        if clash:
            raise DuplicateRegisterName(f"register names shared by both layouts: {sorted(clash)}")
        return RegisterLayout(self.registers + other.registers)


def _check_cap(layout: RegisterLayout) -> None:
    if layout.total_width > _max_qubits:
        raise QubitCapExceeded(
            f"layout needs {layout.total_width} qubits, cap is {_max_qubits} (QMATOPS_MAX_QUBITS)"
        )


@dataclass(frozen=True, eq=False)
class QState:
    """Pure state over a register layout.  The amplitude array is read-only."""

    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_cap(self.layout)
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.layout.dim:
            raise ValidationError(
                f"{amps.size} amplitudes do not match layout dimension {self.layout.dim}"
            )
        if amps is self.amplitudes and amps.flags.writeable:
            amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, layout: RegisterLayout, values: Mapping[str, int]) -> QState:
        _check_cap(layout)
        amps = np.zeros(layout.dim, dtype=np.complex128)
        amps[layout.index_of(values)] = 1.0
        return cls.adopt(layout, amps)

    @classmethod
    def from_amplitudes(cls, layout: RegisterLayout, amplitudes, normalize: bool = False) -> QState:
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amps)
        if normalize:
            if norm == 0:
                raise ZeroMatrix("cannot normalize the zero vector")
            amps = amps / norm
        elif abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"amplitudes have norm {norm!r}, expected 1")
        return cls.adopt(layout, amps)

    @classmethod
    def adopt(cls, layout: RegisterLayout, amps: np.ndarray) -> QState:
        """Wrap an array the caller hands over; no defensive copy is made."""
        amps.flags.writeable = False
        return cls(layout, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, **values: int) -> complex:
        return complex(self.amplitudes[self.layout.index_of(values)])

    def tensor_view(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per register."""
        return self.amplitudes.reshape([1 << w for _, w in self.layout.registers])

    def writable_copy(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=np.complex128, copy=True)

    def __repr__(self) -> str:
        regs = ", ".join(f"{n}:{w}" for n, w in self.layout.registers)
        return f"QState([{regs}], norm={self.norm():.12g})"


@dataclass(frozen=True)
class EncodedMatrix:
    """A state whose (row, col) amplitudes hold ``entry / scale``."""

    state: QState
    row_reg: str
    col_reg: str
    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ValidationError(f"scale must be positive, got {self.scale!r}")
        for name in (self.row_reg, self.col_reg):
            if name not in self.state.layout:
                raise UnknownRegister(f"unknown register {name!r}")

    @property
    def shape(self) -> tuple[int, int]:
        lay = self.state.layout
        return 1 << lay.width(self.row_reg), 1 << lay.width(self.col_reg)

    def decode(self) -> np.ndarray:
        """Normalized matrix carried by the state."""
        return decode_matrix(self.state, self.row_reg, self.col_reg)

    def matrix(self) -> np.ndarray:
        """Matrix rescaled back to the units of the original input(s)."""
        return self.decode() * self.scale


def _log2_dim(size: int, what: str) -> int:
    if size < 2 or size & (size - 1):
        raise NonPowerOfTwo(f"{what} = {size} is not 2**k with k >= 1")
    return size.bit_length() - 1


def as_matrix(data) -> np.ndarray:
    """Validate and convert to a complex (2**n x 2**m) array, n, m >= 1."""
    mat = np.array(data, dtype=np.complex128)
    if mat.ndim != 2:
        raise NonPowerOfTwo(f"expected a 2-D matrix, got shape {mat.shape}")
    _log2_dim(mat.shape[0], "row count")
    _log2_dim(mat.shape[1], "column count")
    if not np.all(np.isfinite(mat)):
        raise ValidationError("matrix contains non-finite entries")
    return mat


def encode_matrix(matrix, row_name: str, col_name: str) -> EncodedMatrix:
    mat = as_matrix(matrix)
    n = _log2_dim(mat.shape[0], "row count")
    m = _log2_dim(mat.shape[1], "column count")
    scale = float(np.linalg.norm(mat))
    if scale == 0.0:
        raise ZeroMatrix("cannot amplitude-encode an all-zero matrix")
    layout = RegisterLayout.of((row_name, n), (col_name, m))
    state = QState.adopt(layout, (mat / scale).reshape(-1))
    return EncodedMatrix(state, row_name, col_name, scale)


def decode_matrix(state: QState, row_name: str, col_name: str) -> np.ndarray:
    """Read the (row, col) amplitude matrix, requiring every other register to
    sit in one basis state."""
    lay = state.layout
    if row_name == col_name:
        raise ValidationError("row and column registers must differ")
    rpos = lay.names.index(row_name) if row_name in lay else None
    cpos = lay.names.index(col_name) if col_name in lay else None
    if rpos is None or cpos is None:
        missing = row_name if rpos is None else col_name
        raise UnknownRegister(f"unknown register {missing!r}")
    tens = state.tensor_view()
    rows, cols = tens.shape[rpos], tens.shape[cpos]
    tens = np.moveaxis(tens, (rpos, cpos), (0, 1)).reshape(rows, cols, -1)
    if tens.shape[2] == 1:
        return np.array(tens[:, :, 0])
    marginal = np.sum(np.abs(tens) ** 2, axis=(0, 1))
    best = int(np.argmax(marginal))
    stray = float(np.sum(marginal) - marginal[best])
    if stray >= RESIDUAL_TOL:
        raise ResidualEntanglement(
            f"registers other than {row_name!r}/{col_name!r} carry mass {stray:.3e} "
            "outside a single basis state"
        )
    return np.array(tens[:, :, best])


def residual_values(state: QState, exclude: Sequence[str] = ()) -> dict[str, int]:
    """Basis values of the registers not in ``exclude``, checked to be sharp."""
    lay = state.layout
    keep = [i for i, name in enumerate(lay.names) if name not in exclude]
    others = [i for i in range(len(lay.names)) if i not in keep]
    tens = np.abs(state.tensor_view()) ** 2
    marginal = tens.sum(axis=tuple(others)) if others else tens
    flat = marginal.reshape(-1)
    best = int(np.argmax(flat))
    if float(flat.sum() - flat[best]) >= RESIDUAL_TOL:
        raise ResidualEntanglement("residual registers are not in a single basis state")
    coords = np.unravel_index(best, marginal.shape)
    return {lay.names[i]: int(c) for i, c in zip(keep, coords)}


def tensor(a: QState, b: QState) -> QState:
    layout = a.layout.concat(b.layout)
    _check_cap(layout)
    return QState.adopt(layout, np.kron(a.amplitudes, b.amplitudes))


def append_ancilla(state: QState, name: str, width: int, value: int = 0) -> QState:
    """Attach a fresh register in ``|value>`` as the least significant bits."""
    if name in state.layout:
        raise DuplicateRegisterName(f"register {name!r} already exists")
    layout = state.layout.appended(name, width)
    layout.check_value(name, value)
    _check_cap(layout)
    amps = np.zeros((state.layout.dim, 1 << width), dtype=np.complex128)
    amps[:, value] = state.amplitudes
    return QState.adopt(layout, amps.reshape(-1))


def merge_registers(state: QState, names: Sequence[str], new_name: str) -> QState:
    """Relabel adjacent registers as one register; amplitudes are untouched.

    ``|x>_A |y>_B`` becomes ``|x * 2**width(B) + y>`` under the index convention,
    so no data moves.
    """
    lay = state.layout
    positions = [lay._position(n) for n in names]
    if positions != list(range(positions[0], positions[0] + len(positions))):
        raise ValidationError(f"registers {list(names)} are not adjacent in order")
    if new_name in lay and new_name not in names:
        raise DuplicateRegisterName(f"register {new_name!r} already exists")
    width = sum(lay.width(n) for n in names)
    regs = lay.registers[: positions[0]] + ((new_name, width),) + lay.registers[positions[-1] + 1:]
    return QState(RegisterLayout(regs), state.amplitudes)


def permute_registers(state: QState, order: Sequence[str]) -> QState:
    """Reorder registers (a pure index permutation)."""
    lay = state.layout
    if sorted(order) != sorted(lay.names):
        raise ValidationError(f"order {list(order)} is not a permutation of {list(lay.names)}")
    axes = [lay._position(n) for n in order]
    amps = np.ascontiguousarray(np.transpose(state.tensor_view(), axes)).reshape(-1)
    layout = RegisterLayout(tuple((n, lay.width(n)) for n in order))
    return QState.adopt(layout, amps)
