import math

import pytest

from qasm_forge.frontend import CompileError, parse
from qasm_forge.symtab import NOT_CONST, SymbolInfo, SymbolTable, c_div, c_rem


def _expr(text):
    return parse(f"const x = {text};\n").statements[0].value


def test_c_integer_semantics():
    assert c_div(-7, 2) == -3
    assert c_rem(-7, 2) == -1
    assert c_div(7, -2) == -3
    assert c_rem(7, -2) == 1


def test_scopes_shadow_and_unwind():
    st = SymbolTable()
    st.declare(SymbolInfo("a", "var"))
    st.enter_scope()
    st.declare(SymbolInfo("a", "var"))
    with pytest.raises(CompileError, match="redeclaration"):
        st.declare(SymbolInfo("a", "var"))
    st.exit_scope()
    assert st.lookup("a") is not None
    assert st.depth == 1


def test_function_boundary_hides_locals_but_not_constants():
    st = SymbolTable()
    st.declare(SymbolInfo("n", "global_const"))
    st.declare(SymbolInfo("v", "var"))
    st.enter_scope(function_boundary=True)
    assert st.lookup("n") is not None
    assert st.lookup("v") is None
    assert st.in_function()
    st.exit_scope()
    assert not st.in_function()
    assert st.lookup("v") is not None


@pytest.mark.parametrize(
    "text, value",
    [("1 + 2 * 3", 7), ("-7 / 2", -3), ("-7 % 2", -1), ("pi / 2", math.pi / 2),
     ("sin(0.5)", math.sin(0.5)), ("2 > 1", True)],
)
def test_constant_folding(text, value):
    assert SymbolTable().eval_const_expr(_expr(text)) == pytest.approx(value)


def test_unknown_names_are_not_constant():
    assert SymbolTable().eval_const_expr(_expr("y + 1")) is NOT_CONST


def test_overflow_and_division_by_zero():
    with pytest.raises(CompileError, match="overflow"):
        SymbolTable().eval_const_expr(_expr("9223372036854775807 + 1"))
    with pytest.raises(CompileError):
        SymbolTable().eval_const_expr(_expr("1 / 0"))
