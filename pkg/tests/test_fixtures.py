from pathlib import Path

import pytest

from qasm_forge import fixtures
from qasm_forge.driver import compile_source

ROOT = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.mark.parametrize("name", sorted(fixtures.FIXTURES))
def test_checked_in_file_matches_generator(name):
    assert (ROOT / f"{name}.qasm").read_text() == fixtures.FIXTURES[name]()


@pytest.mark.parametrize("name", sorted(fixtures.FIXTURES))
def test_fixture_compiles(name):
    compile_source(fixtures.FIXTURES[name](), filename=f"{name}.qasm")


def test_write_all(tmp_path):
    paths = fixtures.write_all(tmp_path)
    assert sorted(p.stem for p in paths) == sorted(fixtures.FIXTURES)


def test_templates_substitute_sizes():
    assert "const nb_qubits = 9;" in fixtures.heisenberg(9)
    assert "theta = 0.5;" in fixtures.deuteron(0.5, 16)
    assert fixtures.trotter(7) != fixtures.trotter(8)
