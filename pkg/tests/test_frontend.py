import pytest

from qasm_forge.frontend import CompileError, SourceLocation, TokenKind, parse, tokenize
from qasm_forge.frontend import ast
from qasm_forge.frontend.diagnostics import Diagnostic, error


def test_tokens_carry_one_based_positions():
    toks = tokenize("qubit q[2];\n  h q;")
    assert [t.text for t in toks[:4]] == ["qubit", "q", "[", "2"]
    assert toks[0].kind == TokenKind.KEYWORD
    h = next(t for t in toks if t.text == "h")
    assert (h.loc.line, h.loc.column) == (2, 3)


def test_comments_are_skipped():
    toks = tokenize("// line\nx /* block\n comment */ q;")
    assert [t.text for t in toks if t.kind != TokenKind.EOF] == ["x", "q", ";"]


def test_float_literals():
    toks = tokenize("1.5 .01 2e-3 3")
    kinds = [t.kind for t in toks[:4]]
    assert kinds[:3] == [TokenKind.FLOAT] * 3
    assert kinds[3] == TokenKind.INT


def test_unterminated_block_comment_is_reported():
    with pytest.raises(CompileError) as exc:
        tokenize("x q; /* never closed")
    assert exc.value.diagnostics[0].loc.line == 1


def test_parse_fixture_shapes():
    prog = parse("qubit q[2];\nh q[0];\ncx q[0], q[1];\n")
    text = ast.dump(prog)
    assert "h" in text and "cx" in text


def test_compute_and_action_are_contextual():
    # usable as ordinary identifiers outside a compute block
    parse("int compute = 1;\nint action = compute + 1;\n")
    parse("qubit q[1];\ncompute {\n  h q[0];\n} action {\n  x q[0];\n}\n")


@pytest.mark.parametrize(
    "source, line, column",
    [
        ("qubit q[2];\nh q[0]\n", 3, 1),
        ("int x = 1;\nx = 1.5 + ;\n", 2, 11),
        ("qubit q[2];\nfor i in [0:2 {\n}\n", 2, 15),
    ],
)
def test_syntax_errors_point_at_offending_token(source, line, column):
    with pytest.raises(CompileError) as exc:
        parse(source)
    loc = exc.value.diagnostics[0].loc
    assert (loc.line, loc.column) == (line, column)


def test_diagnostic_format():
    d = Diagnostic("error", "bad thing", SourceLocation(2, 7))
    assert d.format("prog.qasm") == "prog.qasm:2:7: error: bad thing"
    assert error("x").loc == SourceLocation(1, 1)
