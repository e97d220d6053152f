"""Pass registry and the default optimization pipeline."""
from __future__ import annotations

from typing import Callable

from ..frontend.diagnostics import InternalCompilerError, error
from ..ir.core import IrModule
from ..ir.verifier import verify
from .common import PassConfig
from .constprop import propagate_constants
from .dce import eliminate_dead_code
from .inline import inline_calls
from .lifting import lift_qubit_extracts
from .peephole import merge_rotations, permute_commuting_gates, remove_identity_pairs, simplify_gate_sequences
from .unroll import unroll_affine_loops

PassFn = Callable[[IrModule, PassConfig], bool]

PASSES: dict[str, PassFn] = {
    "inline": inline_calls,
    "unroll": unroll_affine_loops,
    "constprop": propagate_constants,
    "identity-pairs": remove_identity_pairs,
    "merge-rotations": merge_rotations,
    "permute": permute_commuting_gates,
    "simplify": simplify_gate_sequences,
    "lift-extracts": lift_qubit_extracts,
    "dce": eliminate_dead_code,
}

PRELUDE = ("inline", "unroll", "constprop")
PEEPHOLE = ("identity-pairs", "merge-rotations", "permute", "simplify", "lift-extracts")
FINALE = ("dce",)


def run_pass(module: IrModule, name: str, config: PassConfig) -> bool:
    try:
        fn = PASSES[name]
    except KeyError:
        raise ValueError(f"unknown pass '{name}' (known: {', '.join(PASSES)})") from None
    changed = fn(module, config)
    problems = verify(module)
    if problems:
        raise InternalCompilerError(
            [error(f"IR verification failed after pass '{name}': {problems[0].message}")] + problems[1:]
        )
    if changed:
        config.stats[name] = config.stats.get(name, 0) + 1
    return changed


def run_passes(module: IrModule, names: list[str], config: PassConfig | None = None) -> IrModule:
    """Run an explicit pass list once each, in order."""
    config = config or PassConfig()
    for name in names:
        run_pass(module, name, config)
    return module


def run_pipeline(module: IrModule, config: PassConfig | None = None) -> IrModule:
    """Prelude, then peephole rounds until a round changes nothing (at most
    ``peephole_repeat``), then dead code elimination."""
    config = config or PassConfig()
    for name in PRELUDE:
        if config.is_enabled(name):
            run_pass(module, name, config)
    for _ in range(config.peephole_repeat):
        changed = False
        for name in PEEPHOLE:
            if config.is_enabled(name) and run_pass(module, name, config):
                changed = True
        if not changed:
            break
    for name in FINALE:
        if config.is_enabled(name):
            run_pass(module, name, config)
    return module
