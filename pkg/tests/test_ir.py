import pytest

from qasm_forge import fixtures
from qasm_forge.frontend import CompileError, parse
from qasm_forge.ir import build_module, clone_module, parse_ir, print_ir, verify

_LINEAR = """\
func @main() {
  %0 = q.qalloc() {name = "q", size = 1} : () -> (!qarray<1>)
  %1 = q.extract(%0) {index = 0} : (!qarray<1>) -> (!qubit)
  %2 = qvs.h(%1) {params = []} : (!qubit) -> (!qubit)
  %3 = qvs.x(%USE) {params = []} : (!qubit) -> (!qubit)
  q.dealloc(%0) : (!qarray<1>) -> ()
  return
}
"""


@pytest.mark.parametrize("name", sorted(fixtures.FIXTURES))
def test_print_parse_round_trip(name):
    module = build_module(parse(fixtures.FIXTURES[name]()))
    assert verify(module) == []
    text = print_ir(module)
    again = parse_ir(text)
    assert verify(again) == []
    assert print_ir(again) == text


def test_clone_is_independent():
    module = build_module(parse(fixtures.inline_cancel()))
    copy = clone_module(module)
    assert print_ir(copy) == print_ir(module)
    copy.functions.clear()
    assert "foo" in print_ir(module)


def test_well_formed_linear_chain():
    assert verify(parse_ir(_LINEAR.replace("%USE", "%2"))) == []


def test_qubit_used_twice_is_rejected():
    problems = verify(parse_ir(_LINEAR.replace("%USE", "%1")))
    assert any("linearity" in d.message for d in problems)


def test_unknown_opcode_is_rejected():
    problems = verify(parse_ir(_LINEAR.replace("%USE", "%2").replace("qvs.x", "qvs.bogus")))
    assert problems


def test_reader_reports_undefined_values_with_position():
    with pytest.raises(CompileError) as exc:
        parse_ir(_LINEAR.replace("%USE", "%9"))
    loc = exc.value.diagnostics[0].loc
    assert loc.line == 5 and loc.column > 1


def test_builder_tags_compute_and_uncompute_segments():
    text = print_ir(build_module(parse(fixtures.compute_action())))
    assert 'segment = "compute"' in text
    assert 'segment = "uncompute"' in text
    assert "qvs.rz" in text
