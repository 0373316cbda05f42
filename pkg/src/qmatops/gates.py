"""Register-level gate primitives with gate-count and depth bookkeeping.

Each operation takes an immutable :class:`~qmatops.qstate.QState` and returns
a new state together with the :class:`GateStats` it cost.  Multi-controlled X
is treated as one primitive; its decomposition cost is tracked only through
``total_control_qubits``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import OverlappingSupport, PostSelectionImpossible, WidthMismatch
from .qstate import QState

POSTSELECT_MIN_PROB = 1e-12


@dataclass(frozen=True)
class GateStats:
    pattern_controlled_x_count: int = 0
    total_control_qubits: int = 0
    cswap_count: int = 0
    swap_count: int = 0
    hadamard_count: int = 0
    depth_layers: int = 0

    def __add__(self, other: GateStats) -> GateStats:
        """Sequential composition: counts and layers both add."""
        if not isinstance(other, GateStats):
            return NotImplemented
        return GateStats(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    @property
    def primitive_count(self) -> int:
        return self.pattern_controlled_x_count + self.cswap_count + self.swap_count + self.hadamard_count

    def to_dict(self) -> dict[str, int]:
        return asdict(self)


class ControlCondition(NamedTuple):
    """Full-register pattern: ``register`` must hold ``value``."""

    register: str
    value: int


def _conditions(conds: Iterable) -> list[ControlCondition]:
    out = [ControlCondition(str(r), int(v)) for r, v in conds]
    names = [c.register for c in out]
    if len(set(names)) != len(names):
        raise OverlappingSupport(f"a register appears twice in the condition {names}")
    return out


def _same_width(state: QState, *regs: str) -> int:
    widths = {r: state.layout.width(r) for r in regs}
    if len(set(widths.values())) != 1:
        raise WidthMismatch(f"registers need equal widths, got {widths}")
    return next(iter(widths.values()))


def _distinct(*regs: str) -> None:
    if len(set(regs)) != len(regs):
        raise OverlappingSupport(f"registers must be distinct, got {list(regs)}")


def compare_registers_mark(state: QState, reg_a: str, reg_b: str, ancilla: str) -> tuple[QState, GateStats]:
    """Flip ancilla qubit j wherever qubit j of ``reg_a`` equals qubit j of ``reg_b``.

    Per qubit pair this is two 2-control flips, one on pattern (0, 0) and one
    on (1, 1).  Starting from ``|0>``, equal register values drive the ancilla
    to all ones.
    """
    _distinct(reg_a, reg_b, ancilla)
    w = _same_width(state, reg_a, reg_b, ancilla)
    lay = state.layout
    amps = state.writable_copy()
    for j in range(1, w + 1):
        ba = 1 << lay.qubit_bit(reg_a, j)
        bb = 1 << lay.qubit_bit(reg_b, j)
        target = 1 << lay.qubit_bit(ancilla, j)
        kernels.mcx(amps, ba | bb, 0, target)
        kernels.mcx(amps, ba | bb, ba | bb, target)
    # every W_j^0 acts on disjoint qubits, likewise every W_j^1
    stats = GateStats(pattern_controlled_x_count=2 * w, total_control_qubits=4 * w, depth_layers=2)
    return QState.adopt(lay, amps), stats


def pattern_flag(
    state: QState,
    conditions: Iterable,
    target_register: str,
    target_qubit: int = 1,
) -> tuple[QState, GateStats]:
    """Flip one target qubit on the components where every condition register
    holds its stated value.  ``target_qubit`` is 1-based."""
    conds = _conditions(conditions)
    if any(c.register == target_register for c in conds):
        raise OverlappingSupport(f"target register {target_register!r} is also a control")
    lay = state.layout
    mask, value = lay.condition_mask(conds)
    target = 1 << lay.qubit_bit(target_register, target_qubit)
    amps = state.writable_copy()
    kernels.mcx(amps, mask, value, target)
    n_ctrl = sum(lay.width(c.register) for c in conds)
    stats = GateStats(pattern_controlled_x_count=1, total_control_qubits=n_ctrl, depth_layers=1)
    return QState.adopt(lay, amps), stats


def controlled_swap_registers(
    state: QState,
    reg_a: str,
    reg_b: str,
    control_register: str,
    control_qubit: int = 1,
) -> tuple[QState, GateStats]:
    """Exchange ``reg_a`` and ``reg_b`` on components where the control qubit is 1.

    One C-SWAP per qubit pair; they share the control but touch disjoint
    targets, so the whole operator counts as a single layer.
    """
    _distinct(reg_a, reg_b, control_register)
    m = _same_width(state, reg_a, reg_b)
    lay = state.layout
    ctrl = 1 << lay.qubit_bit(control_register, control_qubit)
    amps = state.writable_copy()
    for j in range(1, m + 1):
        kernels.cswap(amps, ctrl, ctrl, 1 << lay.qubit_bit(reg_a, j), 1 << lay.qubit_bit(reg_b, j))
    return QState.adopt(lay, amps), GateStats(cswap_count=m, depth_layers=1)


def swap_registers(state: QState, reg_a: str, reg_b: str) -> tuple[QState, GateStats]:
    _distinct(reg_a, reg_b)
    m = _same_width(state, reg_a, reg_b)
    lay = state.layout
    amps = state.writable_copy()
    for j in range(1, m + 1):
        kernels.cswap(amps, 0, 0, 1 << lay.qubit_bit(reg_a, j), 1 << lay.qubit_bit(reg_b, j))
    return QState.adopt(lay, amps), GateStats(swap_count=m, depth_layers=1)


def hadamard_on_registers(state: QState, regs: Sequence[str]) -> tuple[QState, GateStats]:
    regs = list(regs)
    _distinct(*regs)
    lay = state.layout
    amps = state.writable_copy()
    count = 0
    for name in regs:
        for j in range(1, lay.width(name) + 1):
            kernels.hadamard(amps, 1 << lay.qubit_bit(name, j))
            count += 1
    return QState.adopt(lay, amps), GateStats(hadamard_count=count, depth_layers=1 if count else 0)


def condition_mass(state: QState, conditions: Iterable) -> float:
    """Total squared amplitude on components matching ``conditions``."""
    mask, value = state.layout.condition_mask(_conditions(conditions))
    return float(kernels.mass(np.asarray(state.amplitudes), mask, value))


def postselect(state: QState, register: str, value: int) -> tuple[QState, float]:
    """Project ``register`` onto ``|value>``, renormalize, and drop the register."""
    lay = state.layout
    lay.check_value(register, value)
    prob = condition_mass(state, [(register, value)])
    if prob < POSTSELECT_MIN_PROB:
        raise PostSelectionImpossible(
            f"outcome {register}={value} has probability {prob:.3e} (< {POSTSELECT_MIN_PROB:g})"
        )
    pos = lay.names.index(register)
    kept = np.take(state.tensor_view(), value, axis=pos).reshape(-1) / np.sqrt(prob)
    return QState.adopt(lay.without(register), np.ascontiguousarray(kept)), prob
