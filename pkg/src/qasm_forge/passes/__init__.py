from .common import PassConfig
from .constprop import propagate_constants
from .dce import eliminate_dead_code
from .inline import inline_calls
from .lifting import lift_qubit_extracts
from .peephole import merge_rotations, permute_commuting_gates, remove_identity_pairs, simplify_gate_sequences
from .pipeline import PASSES, PEEPHOLE, PRELUDE, run_pass, run_passes, run_pipeline
from .unroll import unroll_affine_loops

__all__ = [
    "PassConfig", "PASSES", "PEEPHOLE", "PRELUDE", "run_pass", "run_passes", "run_pipeline",
    "inline_calls", "unroll_affine_loops", "propagate_constants", "remove_identity_pairs",
    "merge_rotations", "permute_commuting_gates", "simplify_gate_sequences",
    "lift_qubit_extracts", "eliminate_dead_code",
]
