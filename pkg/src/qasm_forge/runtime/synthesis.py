"""Rewriting collected gate sequences into controlled, adjoint and powered form."""
from __future__ import annotations

import math
from typing import NamedTuple

from ..ir import gates as G


class QuantumRuntimeError(RuntimeError):
    """Failure while executing a program (exit status 2 at the driver)."""


class GateRecord(NamedTuple):
    gate: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    segment: str | None = None
    # how many flagged contexts enclose the gate; see runtime.core
    depth: int = -1


def _like(r: GateRecord, gate: str, qubits, params=()) -> GateRecord:
    return GateRecord(gate, tuple(qubits), tuple(params), r.segment, r.depth)


def dagger_record(r: GateRecord) -> GateRecord:
    name, params = G.dagger(r.gate, list(r.params))
    return _like(r, name, r.qubits, params)


def adjoint(records: list[GateRecord]) -> list[GateRecord]:
    return [dagger_record(r) for r in reversed(records)]


def power(records: list[GateRecord], k: int) -> list[GateRecord]:
    if k < 0:
        return adjoint(records) * (-k)
    return list(records) * k


CCX_DEFAULT_COST = 5
_HALF_PI, _NEG_HALF_PI = (math.pi / 2,), (-math.pi / 2,)
_QUARTER_PI, _NEG_QUARTER_PI = (math.pi / 4,), (-math.pi / 4,)


def decompose_ccx(a: int, b: int, t: int, like: GateRecord) -> list[GateRecord]:
    """ccx as h(t) ccz h(t), with ccz built from three crz and two cx.

    The crz-only core equals ccz up to phases on the controls; the three
    phase gates cancel them so the sequence is exact and can itself be
    controlled.  Counted cost: 2 cx + 3 crz.
    """
    seg, d = like.segment, like.depth
    return [
        GateRecord("h", (t,), (), seg, d),
        GateRecord("crz", (b, t), _HALF_PI, seg, d), GateRecord("phase", (b,), _QUARTER_PI, seg, d),
        GateRecord("cnot", (a, b), (), seg, d),
        GateRecord("crz", (b, t), _NEG_HALF_PI, seg, d), GateRecord("phase", (b,), _NEG_QUARTER_PI, seg, d),
        GateRecord("cnot", (a, b), (), seg, d),
        GateRecord("crz", (a, t), _HALF_PI, seg, d), GateRecord("phase", (a,), _QUARTER_PI, seg, d),
        GateRecord("h", (t,), (), seg, d),
    ]


def _controlled_one(r: GateRecord, c: int) -> list[GateRecord]:
    """Exact controlled form of one record, control ``c`` first."""
    def g(name, qs, ps=()):
        return _like(r, name, qs, ps)

    name, qs, ps = r.gate, r.qubits, r.params
    if c in qs:
        raise QuantumRuntimeError(f"control qubit {c} is also an operand of '{name}' inside a ctrl region")
    if len(qs) == 1:
        t = qs[0]
        if name == "x":
            return [g("cnot", (c, t))]
        if name == "y":
            return [g("cy", (c, t))]
        if name == "z":
            return [g("cz", (c, t))]
        if name == "h":
            return [g("ch", (c, t))]
        if name in G.PHASE_FAMILY:
            return [g("cphase", (c, t), [G.PHASE_FAMILY[name]])]
        if name == "phase":
            return [g("cphase", (c, t), ps)]
        if name == "rz":
            return [g("crz", (c, t), ps)]
        if name == "rx":
            return [g("h", (t,)), g("crz", (c, t), ps), g("h", (t,))]
        if name == "ry":
            th = ps[0]
            return [g("ry", (t,), [th / 2]), g("cnot", (c, t)), g("ry", (t,), [-th / 2]), g("cnot", (c, t))]
        if name == "u":
            th, phi, lam = ps
            return [
                g("phase", (c,), [(lam + phi) / 2]),
                g("phase", (t,), [(lam - phi) / 2]),
                g("cnot", (c, t)),
                g("u", (t,), [-th / 2, 0.0, -(phi + lam) / 2]),
                g("cnot", (c, t)),
                g("u", (t,), [th / 2, phi, 0.0]),
            ]
    elif len(qs) == 2:
        a, t = qs
        if name == "cnot":
            return [g("ccx", (c, a, t))]
        if name == "cy":
            return [g("sdg", (t,)), g("ccx", (c, a, t)), g("s", (t,))]
        if name == "cz":
            return [g("h", (t,)), g("ccx", (c, a, t)), g("h", (t,))]
        if name == "ch":
            return [g("s", (t,)), g("h", (t,)), g("t", (t,)), g("ccx", (c, a, t)),
                    g("tdg", (t,)), g("h", (t,)), g("sdg", (t,))]
        if name == "swap":
            return [g("cnot", (t, a)), g("ccx", (c, a, t)), g("cnot", (t, a))]
        if name == "crz":
            th = ps[0]
            return [g("crz", (a, t), [th / 2]), g("ccx", (c, a, t)),
                    g("crz", (a, t), [-th / 2]), g("ccx", (c, a, t))]
        if name == "cphase":
            lam = ps[0]
            out = [g("cphase", (c, a), [lam / 2])]
            out += _controlled_one(g("crz", (a, t), [lam]), c)
            return out
    elif name == "ccx":
        a, b, t = qs
        out: list[GateRecord] = []
        for piece in decompose_ccx(a, b, t, r):
            out.extend(_controlled_one(piece, c))
        return out
    raise QuantumRuntimeError(f"no controlled form for gate '{name}'")


def controlled(records: list[GateRecord], c: int, base: int, ccx_cost: int | None = None) -> list[GateRecord]:
    """Controlled version of ``records`` on control qubit ``c``.

    Records at depth >= ``base`` belong to a compute or uncompute segment
    opened inside the region and pass through unchanged.
    """
    out: list[GateRecord] = []
    for r in records:
        if r.depth >= base:
            out.append(r)
            continue
        for piece in _controlled_one(r, c):
            if piece.gate == "ccx" and ccx_cost is None:
                out.extend(decompose_ccx(*piece.qubits, piece))
            else:
                out.append(piece)
    return out
