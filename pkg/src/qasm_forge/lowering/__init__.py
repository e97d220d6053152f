from .lir import (
    ARRAY, QIS, QUBIT, RESULT, RT, RT_SYMBOLS, Imm, Inst, LirBlock, LirError, LirFunction, LirModule, Reg,
    check_module, check_region_balance, emit_text,
)
from .lower import lower_to_cfg

__all__ = [
    "ARRAY", "QIS", "QUBIT", "RESULT", "RT", "RT_SYMBOLS", "Imm", "Inst", "LirBlock", "LirError",
    "LirFunction", "LirModule", "Reg", "check_module", "check_region_balance", "emit_text", "lower_to_cfg",
]
