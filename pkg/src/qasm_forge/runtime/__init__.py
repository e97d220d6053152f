from .backends import DEFAULT_QUBIT_CAP, EstimatorBackend, StatevectorBackend, make_backend
from .core import ExecutionConfig, Runtime, Stats
from .ir_exec import IrInterpreter, run_ir
from .synthesis import GateRecord, QuantumRuntimeError, adjoint, controlled, decompose_ccx, power

__all__ = [
    "DEFAULT_QUBIT_CAP", "EstimatorBackend", "StatevectorBackend", "make_backend",
    "ExecutionConfig", "Runtime", "Stats", "IrInterpreter", "run_ir",
    "GateRecord", "QuantumRuntimeError", "adjoint", "controlled", "decompose_ccx", "power",
]
