"""Compile-time benchmark over the templated Trotter program."""
from __future__ import annotations

import statistics
import time

from . import fixtures
from .driver import compile_source


def time_compile(source: str, opt_level: int = 1) -> float:
    start = time.perf_counter()
    compile_source(source, opt_level=opt_level, keep_ir_text=False)
    return time.perf_counter() - start


def bench_compile_time(sizes, reps: int = 5, opt_level: int = 1, warmup: bool = True) -> list[tuple[int, float, float]]:
    """Rows of (n, mean seconds, sample standard deviation) per size; the
    deviation is 0 for a single repetition."""
    if reps < 1:
        raise ValueError("reps must be at least 1")
    rows = []
    for n in sizes:
        source = fixtures.trotter(int(n))
        if warmup:
            time_compile(source, opt_level)
        samples = [time_compile(source, opt_level) for _ in range(reps)]
        std = statistics.stdev(samples) if reps > 1 else 0.0
        rows.append((int(n), statistics.fmean(samples), std))
    return rows


def to_csv(rows) -> str:
    lines = ["n,mean_s,std_s"]
    lines += [f"{n},{mean:.6f},{std:.6f}" for n, mean, std in rows]
    return "\n".join(lines) + "\n"
