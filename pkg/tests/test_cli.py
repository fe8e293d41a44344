import io
import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from doublecat import fixtures
from doublecat.cli import main
from doublecat.serialize import dumps

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
REPORT_SCHEMA = json.loads(resources.files("doublecat").joinpath("schema", "report.schema.json").read_text())


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def pipe_example(capsys, monkeypatch, name, *extra):
    code, text, _ = run(capsys, "examples", name)
    assert code == 0
    return run(capsys, *extra, "check", "-", stdin=text, monkeypatch=monkeypatch)


@pytest.mark.parametrize("name", fixtures.VALID)
def test_examples_then_check_passes(capsys, monkeypatch, name):
    code, out, _ = pipe_example(capsys, monkeypatch, name)
    assert code == 0, out
    assert out.strip().endswith("status: PASS")


def test_broken_action_exit_1_with_named_witnesses(capsys, monkeypatch):
    code, out, _ = pipe_example(capsys, monkeypatch, "broken_action")
    assert code == 1
    assert "axiom_i_V: FAIL" in out
    assert "witness: m=(123), y=(23)" in out
    assert "interchange: FAIL" in out
    assert "interchange_iff_square_equation: ok" in out


def test_malformed_file_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "double_module",\n "M": ')
    code, out, err = run(capsys, "check", str(bad))
    assert code == 2
    assert "line 2" in err


def test_reference_error_exit_2(capsys, tmp_path):
    data = json.loads(dumps(fixtures.c4()))
    data["phi"][0][1] = "9"
    f = tmp_path / "ref.json"
    f.write_text(json.dumps(data))
    code, _, err = run(capsys, "check", str(f))
    assert code == 2 and "unknown arrow" in err


def test_json_output_matches_schema(capsys):
    for name, want in (("c4", 0), ("broken_action", 1)):
        code, out, _ = run(capsys, "--format", "json", "check", name)
        doc = json.loads(out)
        jsonschema.validate(doc, REPORT_SCHEMA)
        assert code == doc["exit_code"] == want
        assert doc["status"] == ("pass" if want == 0 else "fail")
    code, out, _ = run(capsys, "check", "/nope.json", "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert code == 2 and doc["status"] == "error" and doc["error"]["type"] == "ParseError"


def test_global_options_after_subcommand(capsys):
    code, out, _ = run(capsys, "check", "broken_action", "--seed", "5", "--sample", "300", "--format", "json")
    doc = json.loads(out)
    inter = [c for r in doc["reports"] for c in r["checks"] if c["name"] == "interchange"][0]
    assert inter["sampling"] == {"mode": "sampled", "population": 136048896, "sample_size": 300, "seed": 5,
                                 "scheme": inter["sampling"]["scheme"]}


def test_max_grids_flag_and_env(capsys, monkeypatch):
    code, out, _ = run(capsys, "--format", "json", "--max-grids", "100", "check", "c4")
    doc = json.loads(out)
    inter = [c for r in doc["reports"] for c in r["checks"] if c["name"] == "interchange"][0]
    assert inter["sampling"]["mode"] == "sampled"
    monkeypatch.setenv("DCAT_MAX_GRIDS", "100")
    code, out, _ = run(capsys, "--format", "json", "check", "c4")
    inter = [c for r in json.loads(out)["reports"] for c in r["checks"] if c["name"] == "interchange"][0]
    assert inter["sampling"]["mode"] == "sampled"


def test_json_reports_are_deterministic(capsys):
    a = run(capsys, "--format", "json", "--seed", "3", "check", "broken_action")[1]
    b = run(capsys, "--format", "json", "--seed", "3", "check", "broken_action")[1]
    assert a == b


def test_build_counts(capsys):
    code, out, _ = run(capsys, "build", "s3_a3", "--emit", "counts")
    assert code == 0 and out.strip() == "648"
    code, out, _ = run(capsys, "--format", "json", "build", str(FIXTURES / "c4.dm.json"))
    assert json.loads(out)["counts"] == {"squares": 16, "candidates": 32, "composable_grids": 4096}


def test_build_squares(capsys):
    code, out, _ = run(capsys, "build", "c4", "--emit", "squares")
    lines = out.strip().splitlines()
    assert len(lines) == 16 and lines[0] == "(0: 0 0/0 0)"


def test_paste(capsys):
    grid = str(FIXTURES / "s3_a3_grid.json")
    code, out, _ = run(capsys, "paste", "s3_a3", grid)
    assert code == 0 and out.strip() == "((132): (13) e/(132) (23))"
    code, out, _ = run(capsys, "paste", "s3_a3", grid, "--verify-interchange")
    assert code == 0 and "interchange holds" in out
    code, out, err = run(capsys, "paste", "c4", grid)
    assert code == 2


def test_paste_reports_interchange_failure(capsys, tmp_path):
    from doublecat.double import SquareGrid, check_interchange_equiv, select_grids, square_space
    dm = fixtures.broken_action()
    rep = check_interchange_equiv(dm, sample=500)
    w = rep["interchange"].violations[0]
    sp = square_space(dm)
    grids, _ = select_grids(sp, max_grids=1, sample=500)
    for g in grids:
        qs = [sp.square(sp.Q[i]) for i in g]
        if f"[[{qs[0]}, {qs[1]}], [{qs[2]}, {qs[3]}]]" == w["grid"]:
            break
    f = tmp_path / "g.json"
    f.write_text(dumps(SquareGrid(((qs[0], qs[1]), (qs[2], qs[3])))))
    code, out, _ = run(capsys, "paste", "broken_action", str(f), "--verify-interchange")
    assert code == 1 and "interchange FAILS" in out
    assert w["rows_first"] in out and w["cols_first"] in out


def test_check_grid_file(capsys):
    grid = str(FIXTURES / "s3_a3_grid.json")
    assert run(capsys, "check", grid)[0] == 0
    assert run(capsys, "check", grid, "--dm", "s3_a3")[0] == 0
    code, out, _ = run(capsys, "check", grid, "--dm", "c4")
    assert code == 2


def test_examples_to_file_and_list(capsys, tmp_path):
    out_file = tmp_path / "s3.json"
    assert run(capsys, "examples", "s3_a3", "-o", str(out_file))[0] == 0
    assert out_file.read_text() == (FIXTURES / "s3_a3.dm.json").read_text()
    code, out, _ = run(capsys, "examples")
    assert code == 0 and "broken_action" in out
    with pytest.raises(SystemExit):
        main(["examples", "nope"])


def test_extract(capsys, tmp_path):
    f = tmp_path / "cm.json"
    code, out, _ = run(capsys, "extract", "s3_a3", "--direction", "h", "--object", "*", "-o", str(f))
    assert code == 0 and "group of order 3" in out
    assert run(capsys, "check", str(f))[0] == 0
    code, out, _ = run(capsys, "--format", "json", "extract", "c4", "--direction", "v")
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert len(doc["crossed_module"]["group"]["arrows"]) == 2
    code, _, err = run(capsys, "extract", "c4", "--direction", "v", "--object", "nowhere")
    assert code == 2


def test_check_category_and_module_only(capsys, tmp_path):
    from doublecat.groups import build_symmetric
    f = tmp_path / "s3.json"
    f.write_text(dumps(build_symmetric(3)))
    code, out, _ = run(capsys, "check", str(f))
    assert code == 0 and "category" in out
    code, out, _ = run(capsys, "check", "s3_a3", "--module-only")
    assert code == 0 and "double category" not in out


def test_backend_flag(capsys):
    a = run(capsys, "--format", "json", "--backend", "numpy", "check", "c4")[1]
    b = run(capsys, "--format", "json", "--backend", "numba", "check", "c4")[1]
    assert a == b


def test_console_script_pipe():
    p1 = subprocess.run([sys.executable, "-m", "doublecat", "examples", "broken_action"],
                        capture_output=True, text=True, check=True)
    p2 = subprocess.run([sys.executable, "-m", "doublecat", "check", "-", "--sample", "2000"],
                        input=p1.stdout, capture_output=True, text=True)
    assert p2.returncode == 1
    assert "axiom_i_V: FAIL" in p2.stdout
