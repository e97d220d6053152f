import pytest

import helpers as H
from qasm_forge import fixtures
from qasm_forge.driver import compile_source
from qasm_forge.runtime import ExecutionConfig, Runtime, run_ir
from qasm_forge.lowering import (
    RT, Imm, Inst, LirBlock, LirError, LirFunction, Reg, check_region_balance, emit_text, lower_to_cfg,
)


def _fn(*blocks):
    return LirFunction("f", [], [], [LirBlock(label, insts) for label, insts in blocks])


def _call(sym, *args):
    return Inst("call", op=RT + sym, args=list(args))


def test_ghz_text_shape():
    text = emit_text(compile_source(fixtures.ghz()).lir)
    assert text.count("__quantum__qis__h(") == 1
    assert text.count("__quantum__qis__cnot(") == 2
    assert text.index("qubit_allocate_array(") < text.index("qubit_release_array(") < text.index("finalize(")


def test_ctrl_region_brackets_body_and_passes_control():
    src = "def R qubit[1]:r {\n  h r[0];\n}\nqubit c;\nqubit q[1];\nctrl @ R c, q;\n"
    text = emit_text(compile_source(src).lir)
    start = text.index("start_ctrl_u_region()")
    end = text.index("end_ctrl_u_region(!Qubit")
    assert start < text.index("__quantum__qis__h(") < end


def test_loops_become_blocks_at_o0():
    text = emit_text(compile_source("qubit q[1];\nfor i in [0:4] {\n  h q[0];\n}\n", opt_level=0).lir)
    assert "cond_br" in text
    assert text.count("__quantum__qis__h(") == 1


def test_compute_calls_carry_segment_flag():
    text = emit_text(compile_source(fixtures.compute_action(), opt_level=0).lir)
    assert "#compute" in text


def test_balanced_regions_accepted():
    check_region_balance(_fn(("bb0", [_call("start_adj_u_region"), _call("end_adj_u_region"), Inst("ret")])))


def test_return_with_open_region_rejected():
    with pytest.raises(LirError, match="open"):
        check_region_balance(_fn(("bb0", [_call("start_adj_u_region"), Inst("ret")])))


def test_mismatched_region_end_rejected():
    with pytest.raises(LirError, match="unmatched"):
        check_region_balance(_fn(("bb0", [_call("start_adj_u_region"), _call("end_pow_u_region"), Inst("ret")])))


def test_branches_must_agree_on_open_regions():
    cond = Reg("c", "i1")
    fn = _fn(
        ("bb0", [Inst("cond_br", args=[cond], targets=["bb1", "bb2"])]),
        ("bb1", [_call("start_adj_u_region"), Inst("br", targets=["bb2"])]),
        ("bb2", [Inst("ret")]),
    )
    with pytest.raises(LirError, match="different open regions"):
        check_region_balance(fn)


def test_unreachable_block_rejected():
    with pytest.raises(LirError, match="unreachable"):
        check_region_balance(_fn(("bb0", [Inst("ret")]), ("bb1", [Inst("ret")])))


@pytest.mark.parametrize("name", ["ghz", "compute_action", "deuteron", "heisenberg_ctrl"])
def test_lowered_execution_matches_ir_execution(name):
    source = fixtures.FIXTURES[name]()
    for level in (0, 1):
        comp = compile_source(source, opt_level=level)
        a = H.estimator_stats(source, opt_level=level)
        rt = Runtime(ExecutionConfig())
        run_ir(comp.module, rt)
        assert rt.stats.as_dict() == a.as_dict()


def test_lowering_is_deterministic():
    src = fixtures.heisenberg(6)
    assert emit_text(lower_to_cfg(compile_source(src).module)) == emit_text(compile_source(src).lir)
