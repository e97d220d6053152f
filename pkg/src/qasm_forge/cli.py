"""Command line entry point.

Exit status: 0 on success, 1 for compile diagnostics (including a missing
input file), 2 for runtime errors.
"""
from __future__ import annotations

import argparse
import sys

from .bench import bench_compile_time, to_csv
from .driver import STAGES, DriverConfig, emit_stage, run_source
from .frontend.diagnostics import CompileError
from .passes import PASSES
from .runtime import QuantumRuntimeError


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _pass_list(text: str) -> list[str]:
    names = [x.strip() for x in text.split(",") if x.strip()]
    unknown = [n for n in names if n not in PASSES]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown pass(es) {', '.join(unknown)}; known: {', '.join(PASSES)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qasm-forge", description="Compile and run OpenQASM 3 programs.")
    p.add_argument("file", nargs="?", help="input .qasm file")
    p.add_argument("--emit", choices=STAGES, help="print a compilation stage instead of running")
    p.add_argument("-O", dest="opt", choices=("0", "1"), default="1", help="optimization level (-O0 or -O1)")
    p.add_argument("--backend", choices=("estimator", "statevector"), default="estimator")
    p.add_argument("--shots", type=int, default=1, help="number of whole-program runs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pass", dest="passes", type=_pass_list, help="run exactly these passes, in order")
    p.add_argument("--ccx-cost", type=int, default=None,
                   help="count synthesized ccx natively at this cost instead of decomposing it")
    p.add_argument("--bench-trotter", type=_int_list, metavar="N1,N2,...",
                   help="time compilation of the Trotter benchmark for each size and print CSV")
    p.add_argument("--reps", type=int, default=5, help="repetitions per size for --bench-trotter")
    p.add_argument("-o", "--output", help="write the emitted stage or report here instead of stdout")
    return p


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    opt = int(args.opt)

    if args.bench_trotter:
        if args.reps < 1:
            parser.error("--reps must be at least 1")
        _write(to_csv(bench_compile_time(args.bench_trotter, reps=args.reps, opt_level=opt)), args.output)
        return 0
    if args.file is None:
        parser.error("an input file is required unless --bench-trotter is given")
    if args.shots < 1:
        parser.error("--shots must be at least 1")

    try:
        with open(args.file, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        print(f"{args.file}:1:1: error: cannot read input: {exc.strerror}", file=sys.stderr)
        return 1

    config = DriverConfig(args.file, args.emit, opt, args.backend, args.shots, args.seed, args.passes, args.ccx_cost)
    try:
        if config.emit:
            _write(emit_stage(source, config.emit, args.file, opt, config.passes), args.output)
            return 0
        rt = run_source(source, config, filename=args.file, out=sys.stdout)
    except CompileError as exc:
        for d in exc.diagnostics:
            print(d.format(args.file), file=sys.stderr)
        return 1
    except QuantumRuntimeError as exc:
        print(f"{args.file}: runtime error: {exc}", file=sys.stderr)
        return 2
    _write(rt.stats.to_json() + "\n", args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
