"""Compile and run: source -> AST -> IR -> optimized IR -> LIR -> runtime."""
from __future__ import annotations

from dataclasses import dataclass, field

from .frontend import ast, parse
from .frontend.diagnostics import CompileError, InternalCompilerError, error
from .ir import IrModule, build_module, print_ir, verify
from .lowering import LirModule, emit_text, lower_to_cfg
from .passes import PassConfig, run_passes, run_pipeline
from .runtime import ExecutionConfig, Runtime
from .runtime.lir_exec import run_lir

STAGES = ("ast", "ir", "ir-opt", "lowered")


@dataclass
class DriverConfig:
    path: str | None = None
    emit: str | None = None
    opt_level: int = 1
    backend: str = "estimator"
    shots: int = 1
    seed: int = 0
    passes: list[str] | None = None
    ccx_cost: int | None = None

    def __post_init__(self):
        if self.emit is not None and self.emit not in STAGES:
            raise ValueError(f"unknown stage '{self.emit}' (expected one of {', '.join(STAGES)})")
        if self.opt_level not in (0, 1):
            raise ValueError("optimization level must be 0 or 1")

    def execution(self) -> ExecutionConfig:
        return ExecutionConfig(backend=self.backend, shots=self.shots, seed=self.seed, ccx_cost=self.ccx_cost)


@dataclass
class Compilation:
    program: ast.Program
    ir_text: str
    module: IrModule
    lir: LirModule
    pass_stats: dict = field(default_factory=dict)


def _check(module: IrModule, stage: str) -> None:
    problems = verify(module)
    if problems:
        raise InternalCompilerError([error(f"IR verification failed after {stage}: {problems[0].message}")] + problems[1:])


def optimize(module: IrModule, opt_level: int = 1, passes: list[str] | None = None) -> PassConfig:
    """Explicit ``passes`` run once each in order and override the level."""
    config = PassConfig()
    if passes is not None:
        run_passes(module, passes, config)
    elif opt_level >= 1:
        run_pipeline(module, config)
    return config


def compile_source(source: str, filename: str | None = None, opt_level: int = 1,
                   passes: list[str] | None = None, keep_ir_text: bool = True) -> Compilation:
    program = parse(source, filename)
    module = build_module(program)
    _check(module, "IR construction")
    ir_text = print_ir(module) if keep_ir_text else ""
    config = optimize(module, opt_level, passes)
    lir = lower_to_cfg(module)
    return Compilation(program, ir_text, module, lir, dict(config.stats))


def emit_stage(source: str, stage: str, filename: str | None = None, opt_level: int = 1,
               passes: list[str] | None = None) -> str:
    if stage == "ast":
        return ast.dump(parse(source, filename)) + "\n"
    if stage == "ir":
        module = build_module(parse(source, filename))
        _check(module, "IR construction")
        return print_ir(module)
    comp = compile_source(source, filename, opt_level, passes, keep_ir_text=False)
    if stage == "ir-opt":
        return print_ir(comp.module)
    if stage == "lowered":
        return emit_text(comp.lir)
    raise ValueError(f"unknown stage '{stage}'")


def execute(lir: LirModule, config: ExecutionConfig, out=None) -> Runtime:
    """Run the whole program ``config.shots`` times on one runtime."""
    rt = Runtime(config, out=out)
    for shot in range(config.shots):
        if shot:
            rt.new_shot()
        run_lir(lir, rt)
    return rt


def run_source(source: str, config: DriverConfig, filename: str | None = None, out=None) -> Runtime:
    comp = compile_source(source, filename, config.opt_level, config.passes, keep_ir_text=False)
    return execute(comp.lir, config.execution(), out=out)


__all__ = [
    "STAGES", "DriverConfig", "Compilation", "CompileError", "compile_source", "emit_stage",
    "execute", "optimize", "run_source",
]
