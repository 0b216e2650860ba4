import csv
import io
import json
from fractions import Fraction as F

import pytest

from vforge.cli import emit_grid, main
from vforge.errors import DomainError
from vforge.gallery import assemble
from vforge.hyperspace import Profile


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def test_eval_thm(capsys):
    code, out, _ = run(capsys, "eval", "thm", "--x", "1/2", "--y", "1/4")
    assert code == 0
    assert out == '{"prefix":["1/6","1/6"],"tail":"0"}'
    assert Profile.from_json(json.loads(out)) == Profile.of([F(1, 6), F(1, 6)])


def test_eval_accepts_construction_flag(capsys):
    code, out, _ = run(capsys, "eval", "--construction", "baire", "--x", "1/2", "--y", "1")
    assert (code, out) == (0, '"7/16"')


def test_eval_near_diagonal_is_exact_even_with_small_depth(capsys):
    y = str(F(1, 2) + F(1, 2**80))
    code, out, _ = run(capsys, "eval", "thm", "--x", "1/2", "--y", y, "--depth", "16")
    assert code == 0
    p = Profile.from_json(json.loads(out))
    assert p.tail == 0 and p.prefix_length > 2**70


def test_env_depth_override(capsys, monkeypatch):
    monkeypatch.setenv("VFORGE_DEPTH", "nope")
    code, _, err = run(capsys, "eval", "thm", "--x", "1/2", "--y", "1/4")
    assert code == 64 and "VFORGE_DEPTH" in err
    monkeypatch.setenv("VFORGE_DEPTH", "8")
    assert run(capsys, "eval", "thm", "--x", "1/2", "--y", "1/4")[0] == 0


@pytest.mark.parametrize(
    "argv,code",
    [
        (["eval", "thm", "--x", "0.5", "--y", "1/4"], 65),
        (["eval", "thm", "--x", "1/0", "--y", "1/4"], 65),
        (["eval", "thm", "--x", "1", "--y", "1/4"], 64),
        (["eval", "fan", "--x", "1/2", "--y", "1/4"], 64),
        (["eval", "thm", "--x", "1/2"], 64),
        (["eval", "--x", "1/2", "--y", "1/4"], 64),
        (["grid", "thm", "--step=-1/8"], 64),
        (["axioms", "--connector", "nope"], 64),
    ],
)
def test_error_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_unknown_command_exits_64(capsys):
    assert main(["frobnicate"]) == 64
    assert main(["--help"]) == 0


def test_check_diagonal_semantics(capsys):
    code, out, _ = run(capsys, "check-diagonal", "thm", "--x0", "1/2")
    rep = json.loads(out)
    assert code == 0 and rep["pass"] is True
    assert rep["verdicts"][0]["kind"] == "violation"
    assert rep["params"]["halo_preimage"]["hi"] == "1/2"
    code, out, _ = run(capsys, "check-diagonal", "baire", "--x0", "1/2")
    assert code == 0 and json.loads(out)["verdicts"][0]["kind"] == "no_violation"


def test_check_separate(capsys):
    code, out, _ = run(capsys, "check-separate", "thm", "--x", "1/2", "--y", "1/4", "--resolution", "1/64")
    reps = json.loads(out)
    assert code == 0 and len(reps) == 2 and all(r["pass"] for r in reps)


def test_convergence_and_axioms(capsys):
    code, out, _ = run(capsys, "convergence", "fan", "--x", "0")
    assert code == 0 and json.loads(out)["pass"]
    code, out, _ = run(capsys, "axioms", "--connector", "linear", "--samples", "50")
    assert code == 0 and json.loads(out)["probe"] == "axioms"


def test_grid_examples():
    thm = assemble("thm")
    rows = list(csv.DictReader(io.StringIO(emit_grid(thm, (F(1, 4), F(3, 4)), (F(1, 4), F(3, 4)), F(1, 8)))))
    assert len(rows) == 25
    row = next(r for r in rows if (r["x"], r["y"]) == ("1/2", "1/4"))
    assert row["gap"] == "1/2"
    # row-major: x outer, y inner
    assert [(r["x"], r["y"]) for r in rows[:2]] == [("1/4", "1/4"), ("1/4", "3/8")]

    baire = assemble("baire")
    rows = list(csv.DictReader(io.StringIO(emit_grid(baire, (F(0), F(1)), (F(0), F(1)), F(1, 2)))))
    assert len(rows) == 9
    assert next(r for r in rows if r["x"] == r["y"] == "1")["value"] == '"1"'
    assert all(r["gap"] == "" for r in rows)

    single = emit_grid(thm, (F(1, 3), F(1, 3)), (F(1, 3), F(1, 3)), F(1, 8))
    assert len(single.strip().splitlines()) == 2


def test_grid_rejects_out_of_domain_bounds():
    with pytest.raises(DomainError):
        emit_grid(assemble("thm"), (F(0), F(1, 2)), (F(1, 4), F(1, 2)), F(1, 8))


def test_grid_cli_is_deterministic_and_atomic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _, _ = run(capsys, "grid", "remark", "--x-range", "0:1", "--y-range", "0:1", "--step", "1/4", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("x,y,value,gap\n")
    assert [p.name for p in tmp_path.iterdir() if p.name.startswith(".")] == []


def test_grid_json_format(capsys):
    code, out, _ = run(capsys, "grid", "baire", "--x-range", "0:1", "--y-range", "1:1", "--step", "1", "--format", "json")
    assert code == 0
    assert json.loads(out) == [
        {"x": "0", "y": "1", "value": '"0"', "gap": ""},
        {"x": "1", "y": "1", "value": '"1"', "gap": ""},
    ]


def test_suite_subset(capsys):
    code, out, err = run(capsys, "suite", "--only", "1,6")
    assert code == 0
    assert [r["criterion"] for r in json.loads(out)] == [1, 6]
    assert err.count("PASS") == 2
