"""End-to-end circuits: Hadamard product, Kronecker product, column addition
and column swap.

Each pipeline encodes its input(s), runs the flag/swap/Hadamard sequence on a
statevector, post-selects the last flag qubit where needed, checks that every
leftover register collapsed to the expected basis value and returns an
:class:`AlgorithmResult`.

Register names follow the circuit diagrams: ``R1``/``C1`` index the (first)
input, ``R2``/``C2`` the second input or the auxiliary selector state, and
``B1``..``B4`` are the flag ancillas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gates
from .errors import ColumnIndexOutOfRange, DimensionMismatch, EqualColumns, ResidualEntanglement
from .gates import GateStats
from .qstate import (
    RESIDUAL_TOL,
    EncodedMatrix,
    QState,
    RegisterLayout,
    append_ancilla,
    as_matrix,
    encode_matrix,
    merge_registers,
    permute_registers,
    tensor,
)


@dataclass(frozen=True)
class StageRecord:
    stage: str
    norm: float
    flag_mass: dict[str, float] | None = None
    stats: GateStats = GateStats()

    def to_dict(self) -> dict:
        out = {"stage": self.stage, "norm": self.norm}
        if self.flag_mass is not None:
            out["flag_mass"] = dict(self.flag_mass)
        return out


@dataclass(frozen=True)
class AlgorithmResult:
    output: EncodedMatrix
    success_probability: float
    stats: GateStats
    stage_trace: tuple[StageRecord, ...] = field(default_factory=tuple)

    def decoded(self) -> np.ndarray:
        return self.output.decode()

    def trace_dicts(self) -> list[dict]:
        return [rec.to_dict() for rec in self.stage_trace]


class _Run:
    """Accumulates state, gate statistics and the stage trace of one pipeline."""

    def __init__(self, state: QState):
        self.state = state
        self.stats = GateStats()
        self.trace: list[StageRecord] = []
        self._pending = GateStats()

    def apply(self, op, *args, **kwargs) -> None:
        self.state, cost = op(self.state, *args, **kwargs)
        self._pending = self._pending + cost

    def ancilla(self, name: str, width: int = 1) -> None:
        self.state = append_ancilla(self.state, name, width, 0)

    def stage(self, label: str, **flags: list) -> None:
        masses = {key: gates.condition_mass(self.state, conds) for key, conds in flags.items()}
        self.trace.append(StageRecord(label, self.state.norm(), masses or None, self._pending))
        self.stats = self.stats + self._pending
        self._pending = GateStats()

    def measure(self, label: str, register: str, value: int) -> float:
        self.state, prob = gates.postselect(self.state, register, value)
        self.stage(label)
        return prob


def _collapse(state: QState, expected: dict[str, int]) -> QState:
    """Verify registers in ``expected`` hold exactly those values, then drop them."""
    lay = state.layout
    index = []
    for name, _ in lay.registers:
        index.append(expected[name] if name in expected else slice(None))
    kept = state.tensor_view()[tuple(index)]
    stray = 1.0 - float(np.sum(np.abs(kept) ** 2))
    if abs(stray) >= RESIDUAL_TOL:
        raise ResidualEntanglement(f"leftover registers {expected} carry stray mass {stray:.3e}")
    layout = RegisterLayout(tuple(r for r in lay.registers if r[0] not in expected))
    return QState.adopt(layout, np.ascontiguousarray(kept).reshape(-1))


def _log2(x: int) -> int:
    return x.bit_length() - 1


def _check_columns(cols: int, k: int, l: int) -> None:
    for name, idx in (("k", k), ("l", l)):
        if not 0 <= idx < cols:
            raise ColumnIndexOutOfRange(f"{name}={idx} outside 0..{cols - 1}")
    if k == l:
        raise EqualColumns(f"k and l must differ (both {k})")


def hadamard_product(a, b) -> AlgorithmResult:
    """Entrywise product of two equally shaped matrices.

    Row and column registers of the two encodings are compared qubit by qubit
    into B1 and B2; B3 marks the fully matching branch, a Hadamard layer on
    R2/C2 folds the duplicated indices, and B4 selects ``R2 = C2 = 0`` within
    the marked branch.  Succeeds with probability ``G**2 / 2**(n+m)``.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"Hadamard product needs equal shapes, got {a.shape} and {b.shape}")
    ea = encode_matrix(a, "R1", "C1")
    eb = encode_matrix(b, "R2", "C2")
    n, m = _log2(a.shape[0]), _log2(a.shape[1])
    rows_full, cols_full = (1 << n) - 1, (1 << m) - 1

    run = _Run(tensor(ea.state, eb.state))
    run.stage("Phi0")
    run.ancilla("B1", n)
    run.apply(gates.compare_registers_mark, "R1", "R2", "B1")
    run.stage("Phi1", **{"B1=N-1": [("B1", rows_full)]})
    run.ancilla("B2", m)
    run.apply(gates.compare_registers_mark, "C1", "C2", "B2")
    run.stage("Phi2", **{"B1B2=(N-1)(M-1)": [("B1", rows_full), ("B2", cols_full)]})
    run.ancilla("B3")
    run.apply(gates.pattern_flag, [("B1", rows_full), ("B2", cols_full)], "B3")
    run.stage("Phi3", **{"B3=1": [("B3", 1)]})
    run.apply(gates.hadamard_on_registers, ["R2", "C2"])
    run.stage("Phi4")
    run.ancilla("B4")
    run.apply(
        gates.pattern_flag,
        [("R2", 0), ("C2", 0), ("B1", rows_full), ("B2", cols_full), ("B3", 1)],
        "B4",
    )
    run.stage("Phi5", **{"B4=1": [("B4", 1)]})
    prob = run.measure("Phi6", "B4", 1)

    out = _collapse(run.state, {"R2": 0, "C2": 0, "B1": rows_full, "B2": cols_full, "B3": 1})
    g = math.sqrt(prob * 2 ** (n + m))
    encoded = EncodedMatrix(out, "R1", "C1", ea.scale * eb.scale * g)
    return AlgorithmResult(encoded, prob, run.stats, tuple(run.trace))


def kronecker_product(a, b, general: bool = False) -> AlgorithmResult:
    """Kronecker product ``a (x) b`` with no measurement.

    In the default mode ``b`` must have as many rows as ``a`` has columns, so
    the column register of ``a`` and the row register of ``b`` can be swapped
    (m SWAP gates, one layer) and the register pairs merged.  ``general=True``
    accepts any shapes and reorders the registers directly; that costs no
    gates at all and is an extension of the swap-based construction.
    """
    a, b = as_matrix(a), as_matrix(b)
    if not general and b.shape[0] != a.shape[1]:
        raise DimensionMismatch(
            f"row count of b ({b.shape[0]}) must equal column count of a ({a.shape[1]}); "
            "pass general=True for arbitrary shapes"
        )
    ea = encode_matrix(a, "R1", "C1")
    eb = encode_matrix(b, "R2", "C2")
    run = _Run(tensor(ea.state, eb.state))
    run.stage("Phi0")
    if general:
        run.state = permute_registers(run.state, ["R1", "R2", "C1", "C2"])
        run.state = merge_registers(run.state, ["R1", "R2"], "R")
        run.state = merge_registers(run.state, ["C1", "C2"], "C")
    else:
        run.apply(gates.swap_registers, "C1", "R2")
        # R1 C1 now hold (s1, s2), R2 C2 hold (t1, t2)
        run.state = merge_registers(run.state, ["R1", "C1"], "R")
        run.state = merge_registers(run.state, ["R2", "C2"], "C")
    run.stage("Phi1")
    encoded = EncodedMatrix(run.state, "R", "C", ea.scale * eb.scale)
    return AlgorithmResult(encoded, 1.0, run.stats, tuple(run.trace))


def column_add(a, k: int, l: int) -> AlgorithmResult:
    """Add column ``k`` into column ``l`` (0-based).

    Succeeds with probability ``G**2 / 8`` where ``G`` is the Frobenius norm of
    the transformed (normalized) matrix.
    """
    a = as_matrix(a)
    _check_columns(a.shape[1], k, l)
    ea = encode_matrix(a, "R1", "C1")
    m = _log2(a.shape[1])
    selector = np.zeros(1 << m, dtype=complex)
    selector[[k, l]] = 1 / math.sqrt(2)
    psi2 = QState(RegisterLayout.of(("C2", m)), selector)

    run = _Run(tensor(ea.state, psi2))
    run.stage("Phi0")
    run.ancilla("B1")
    run.apply(gates.pattern_flag, [("C2", k)], "B1")
    run.stage("Phi1", **{"B1=1": [("B1", 1)]})
    run.ancilla("B2")
    run.apply(gates.pattern_flag, [("C1", k), ("B1", 0)], "B2")
    run.stage("Phi2", **{"B2=1": [("B2", 1)]})
    run.apply(gates.controlled_swap_registers, "C1", "C2", "B2")
    run.stage("Phi3")
    run.ancilla("B3")
    run.apply(gates.pattern_flag, [("B1", 0), ("B2", 0)], "B3")
    run.stage("Phi4", **{"B3=0": [("B3", 0)]})
    run.apply(gates.hadamard_on_registers, ["B1", "B2"])
    run.stage("Phi5")
    run.ancilla("B4")
    run.apply(gates.pattern_flag, [("B1", 0), ("B2", 0), ("B3", 0)], "B4")
    run.stage("Phi6", **{"B4=1": [("B4", 1)]})
    prob = run.measure("Phi7", "B4", 1)

    out = _collapse(run.state, {"C2": k, "B1": 0, "B2": 0, "B3": 0})
    g = math.sqrt(8 * prob)
    encoded = EncodedMatrix(out, "R1", "C1", ea.scale * g)
    return AlgorithmResult(encoded, prob, run.stats, tuple(run.trace))


def column_swap(a, k: int, l: int) -> AlgorithmResult:
    """Exchange columns ``k`` and ``l`` (0-based); succeeds with probability 1/24."""
    a = as_matrix(a)
    _check_columns(a.shape[1], k, l)
    ea = encode_matrix(a, "R1", "C1")
    m = _log2(a.shape[1])
    M = 1 << m
    selector = np.zeros((M, M), dtype=complex)
    for r, c in ((l, k), (k, k), (l, l)):
        selector[r, c] = 1 / math.sqrt(3)
    psi2 = QState(RegisterLayout.of(("R2", m), ("C2", m)), selector.reshape(-1))

    run = _Run(tensor(ea.state, psi2))
    run.stage("Phi0")
    run.ancilla("B1")
    run.apply(gates.pattern_flag, [("R2", l), ("C2", k)], "B1")
    run.stage("Phi1", **{"B1=1": [("B1", 1)]})
    run.ancilla("B2", 2)
    run.apply(gates.pattern_flag, [("C1", k), ("R2", l)], "B2", 1)
    run.apply(gates.pattern_flag, [("C1", l), ("C2", k)], "B2", 2)
    run.stage("Phi2")
    run.apply(gates.controlled_swap_registers, "C1", "C2", "B2", 1)
    run.apply(gates.controlled_swap_registers, "C1", "R2", "B2", 2)
    run.stage("Phi3")
    run.ancilla("B3")
    # B2 value: qubit 1 is the high bit, so "10" -> 2 and "01" -> 1
    for b1, b2 in ((1, 0b00), (0, 0b01), (0, 0b10)):
        run.apply(gates.pattern_flag, [("B1", b1), ("B2", b2)], "B3")
    run.stage("Phi4", **{"B3=1": [("B3", 1)]})
    run.apply(gates.hadamard_on_registers, ["B1", "B2"])
    run.stage("Phi5")
    run.ancilla("B4")
    run.apply(gates.pattern_flag, [("B1", 0), ("B2", 0), ("B3", 1)], "B4")
    run.stage("Phi6", **{"B4=1": [("B4", 1)]})
    prob = run.measure("Phi7", "B4", 1)

    out = _collapse(run.state, {"R2": l, "C2": k, "B1": 0, "B2": 0, "B3": 1})
    g = math.sqrt(24 * prob)
    encoded = EncodedMatrix(out, "R1", "C1", ea.scale * g)
    return AlgorithmResult(encoded, prob, run.stats, tuple(run.trace))


ALGORITHMS = {
    "hadamard": hadamard_product,
    "kron": kronecker_product,
    "col-add": column_add,
    "col-swap": column_swap,
}
