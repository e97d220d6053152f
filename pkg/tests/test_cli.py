import json

import pytest

from qasm_forge import cli, fixtures


@pytest.fixture
def files(tmp_path):
    return {p.stem: p for p in fixtures.write_all(tmp_path)}


def test_run_prints_stats_json(files, capsys):
    assert cli.main([str(files["ghz"])]) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["total_gates"] == 3
    assert stats["per_gate"] == {"cnot": 2, "h": 1}


def test_statevector_run_prints_program_output(files, capsys):
    assert cli.main([str(files["deuteron"]), "--backend=statevector", "--seed=7"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("Avg <X0X1> = ")


@pytest.mark.parametrize("stage", ["ast", "ir", "ir-opt", "lowered"])
def test_emit_stages(files, stage, capsys):
    assert cli.main([str(files["inline_cancel"]), f"--emit={stage}"]) == 0
    assert capsys.readouterr().out.strip()


def test_emit_to_file(files, tmp_path):
    out = tmp_path / "ghz.ll"
    assert cli.main([str(files["ghz"]), "--emit=lowered", "-o", str(out)]) == 0
    assert "__quantum__qis__h" in out.read_text()


def test_o0_keeps_redundant_gates(files, capsys):
    cli.main([str(files["inline_cancel"]), "-O0"])
    assert json.loads(capsys.readouterr().out)["total_gates"] == 2
    cli.main([str(files["inline_cancel"]), "-O1"])
    assert json.loads(capsys.readouterr().out)["total_gates"] == 0


def test_explicit_pass_list(files, capsys):
    # the pair only becomes adjacent on shared qubit values once extracts are lifted
    assert cli.main([str(files["inline_cancel"]), "--pass=inline,identity-pairs"]) == 0
    assert json.loads(capsys.readouterr().out)["total_gates"] == 2
    assert cli.main([str(files["inline_cancel"]), "--pass=inline,lift-extracts,identity-pairs"]) == 0
    assert json.loads(capsys.readouterr().out)["total_gates"] == 0


def test_unknown_pass_is_a_usage_error(files):
    with pytest.raises(SystemExit) as exc:
        cli.main([str(files["inline_cancel"]), "--pass=nope"])
    assert exc.value.code == 2


def test_compile_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.qasm"
    bad.write_text("qubit q[2];\nh r[0];\n")
    assert cli.main([str(bad)]) == 1
    assert f"{bad}:2:3: error: undeclared qubit register 'r'" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    path = tmp_path / "absent.qasm"
    assert cli.main([str(path)]) == 1
    assert capsys.readouterr().err.startswith(f"{path}:1:1: error: cannot read input")


def test_runtime_error_exit_code(tmp_path, capsys):
    src = tmp_path / "big.qasm"
    src.write_text("qubit q[30];\nh q[0];\n")
    assert cli.main([str(src), "--backend=statevector"]) == 2
    assert "runtime error" in capsys.readouterr().err


def test_bench_csv(capsys):
    assert cli.main(["--bench-trotter=5,10", "--reps=1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "n,mean_s,std_s"
    rows = [line.split(",") for line in lines[1:]]
    assert [r[0] for r in rows] == ["5", "10"]
    assert all(float(r[1]) > 0 and float(r[2]) == 0 for r in rows)


def test_seed_changes_samples(files, capsys):
    outs = set()
    for seed in range(4):
        cli.main([str(files["deuteron"]), "--backend=statevector", f"--seed={seed}"])
        outs.add(capsys.readouterr().out)
    assert len(outs) > 1
