"""Gate-level rewrites on qubit use-define chains.

All rules work on unflagged gates with static parameters outside
ctrl/adj/pow bodies.  Rules that only hold up to a global phase are turned
off in functions that can execute under a control.
"""
from __future__ import annotations

import math

from ..ir import gates as G
from ..ir.core import IrModule, Operation
from .common import (
    PassConfig, blocks_of, ctrl_reachable, erase_chain_pair, insert_gate, is_scalar_gate,
    next_on_lines, single_user,
)

TOL = 1e-12
_AXIS_ROTATIONS = frozenset({"rx", "ry", "rz", "crz"})
_PHASE_LIKE = frozenset(G.PHASE_FAMILY) | {"phase"}
_DIAGONAL_1Q = _PHASE_LIKE | {"rz"}


def _for_each_gate(module: IrModule, rewrite) -> bool:
    """Apply ``rewrite(op, exact_only)`` to every candidate gate until no
    rewrite fires; returns whether anything changed."""
    restricted = ctrl_reachable(module)
    changed = False
    for fn in module.functions.values():
        exact_only = fn.name in restricted
        for block in list(blocks_of(fn, skip_modifiers=True)):
            progress = True
            while progress:
                progress = False
                for op in list(block.ops):
                    if op.parent is block and is_scalar_gate(op) and rewrite(op, exact_only):
                        progress = changed = True
    return changed


def _angle(op: Operation) -> float:
    if op.gate in G.PHASE_FAMILY:
        return G.PHASE_FAMILY[op.gate]
    return op.attrs["params"][0]


# -- identity pairs -------------------------------------------------------------


def _identity(op: Operation, exact_only: bool) -> bool:
    if op.gate == "reset":
        return False
    nxt = next_on_lines(op)
    if nxt is None or not is_scalar_gate(nxt):
        return False
    if not G.is_adjoint_pair(op.gate, op.attrs["params"], nxt.gate, nxt.attrs["params"]):
        return False
    erase_chain_pair(op, nxt, list(op.operands))
    return True


def _resets(module: IrModule) -> bool:
    changed = False
    for fn in module.functions.values():
        for block in list(blocks_of(fn, skip_modifiers=True)):
            for op in list(block.ops):
                if op.parent is not block or op.name != "qvs.reset" or op.segment:
                    continue
                nxt = single_user(op.result)
                if nxt is not None and nxt.name == "qvs.reset" and not nxt.segment:
                    nxt.result.replace_all_uses_with(op.result)
                    nxt.erase()
                    changed = True
    return changed


def remove_identity_pairs(module: IrModule, config: PassConfig | None = None) -> bool:
    changed = _for_each_gate(module, _identity)
    return _resets(module) or changed


# -- rotation merging (worklist form of the merge algorithm) -----------------------


def merged(a: Operation, b: Operation, exact_only: bool) -> tuple[str, list[float]] | None:
    """Single gate equal to ``b`` after ``a`` on the same lines, or None.
    ``("id", [])`` means the pair cancels."""
    ga, gb = a.gate, b.gate
    if ga == gb and ga in _AXIS_ROTATIONS:
        total = a.attrs["params"][0] + b.attrs["params"][0]
        return ("id", []) if abs(total) <= TOL else (ga, [total])
    if ga == gb == "cphase":
        total = a.attrs["params"][0] + b.attrs["params"][0]
        return ("id", []) if abs(math.remainder(total, 2 * math.pi)) <= TOL else ("cphase", [total])
    if len(a.operands) != 1:
        return None
    if ga in _PHASE_LIKE and gb in _PHASE_LIKE:
        return G.phase_gate_for(_angle(a) + _angle(b))
    if not exact_only and {ga, gb} <= _DIAGONAL_1Q and "rz" in (ga, gb):
        # phase(x) = rz(x) up to a global phase
        total = _angle(a) + _angle(b)
        return ("id", []) if abs(total) <= TOL else ("rz", [total])
    return None


def _merge(op: Operation, exact_only: bool) -> bool:
    nxt = next_on_lines(op)
    if nxt is None or not is_scalar_gate(nxt):
        return False
    out = merged(op, nxt, exact_only)
    if out is None:
        return False
    name, params = out
    if name == "id":
        erase_chain_pair(op, nxt, list(op.operands))
    else:
        new = insert_gate(nxt, name, list(op.operands), params)
        erase_chain_pair(op, nxt, new.results)
    return True


def merge_rotations(module: IrModule, config: PassConfig | None = None) -> bool:
    return _for_each_gate(module, _merge)


# -- commutation -------------------------------------------------------------------

# (gate on one line of a cnot, operand position it may pass through)
def _commutes_through_cnot(gate: str, position: int) -> bool:
    if position == 0:
        return gate in _DIAGONAL_1Q
    return gate in ("x", "rx")


def _permute(op: Operation, exact_only: bool) -> bool:
    if len(op.operands) != 1:
        return False
    mid = single_user(op.result)
    if mid is None or mid.gate != "cnot" or not is_scalar_gate(mid):
        return False
    pos = mid.operands.index(op.result)
    if not _commutes_through_cnot(op.gate, pos):
        return False
    after = single_user(mid.results[pos])
    if after is None or not is_scalar_gate(after) or len(after.operands) != 1:
        return False
    # only move when it creates a merge or a cancellation
    if not (merged(op, after, exact_only) is not None
            or G.is_adjoint_pair(op.gate, op.attrs["params"], after.gate, after.attrs["params"])):
        return False
    src = op.operands[0]
    out_mid = mid.results[pos]
    mid.set_operand(pos, src)
    op.set_operand(0, out_mid)
    after.replace_operand(out_mid, op.result)
    block = op.parent
    block.ops.remove(op)
    block.insert_after(mid, op)
    return True


def permute_commuting_gates(module: IrModule, config: PassConfig | None = None) -> bool:
    return _for_each_gate(module, _permute)


# -- sequence simplification --------------------------------------------------------

# middle gate of an h.g.h window -> replacement (name, params, exact)
_H_WINDOWS = {
    "z": ("x", [], True),
    "x": ("z", [], True),
    "t": ("rx", [math.pi / 4], False),
    "tdg": ("rx", [-math.pi / 4], False),
    "s": ("rx", [math.pi / 2], False),
    "sdg": ("rx", [-math.pi / 2], False),
}


def _simplify(op: Operation, exact_only: bool) -> bool:
    if op.gate != "h":
        return False
    mid = single_user(op.result)
    if mid is None or not is_scalar_gate(mid) or len(mid.operands) != 1 or mid.gate not in _H_WINDOWS:
        return False
    last = single_user(mid.result)
    if last is None or not is_scalar_gate(last) or last.gate != "h":
        return False
    name, params, exact = _H_WINDOWS[mid.gate]
    if exact_only and not exact:
        return False
    new = insert_gate(last, name, list(op.operands), params)
    last.result.replace_all_uses_with(new.result)
    last.erase()
    mid.erase()
    op.erase()
    return True


def simplify_gate_sequences(module: IrModule, config: PassConfig | None = None) -> bool:
    return _for_each_gate(module, _simplify)
