from .builder import build_module
from .core import Block, FunctionDef, Global, IrModule, Operation, Region, Value, clone_module, clone_op
from .printer import print_ir
from .reader import parse_ir
from .verifier import verify

__all__ = [
    "Block", "FunctionDef", "Global", "IrModule", "Operation", "Region", "Value", "clone_module", "clone_op",
    "build_module", "print_ir", "parse_ir", "verify",
]
