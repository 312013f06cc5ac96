from __future__ import annotations

import json

import numpy as np
import pytest

from cfporecon.cli import main


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as e:  # argparse rejects bad choices before main returns
        code = e.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_writes_points_and_edges(capsys, tmp_path):
    code, out, _ = run(["generate", "star:5,0"], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc["points"]) == 6 and len(doc["edges"]) == 5
    dest = tmp_path / "ball.json"
    assert main(["generate", "ball:2,2,2", "--out", str(dest)]) == 0
    assert json.loads(dest.read_text())["points"]


def test_census_star5(capsys):
    code, out, err = run(["census", "--instance", "star:5,0"], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc) == 1 and len(doc[0]["listings"]) == 120
    assert "complete" in err


@pytest.mark.parametrize("lemma", ["A5Behaves", "no60"])
def test_verify_passing_lemmas_exit_zero(lemma, capsys):
    code, out, _ = run(["verify", "--lemma", lemma, "--instance", "star:5,0"], capsys)
    assert code == 0
    assert json.loads(out)


def test_verify_lessdot_outside_suite_reports(capsys):
    code, out, _ = run(["verify", "--lemma", "lessdot", "--instance", "alt:6,5,2", "--n-max", "5"], capsys)
    assert code in (0, 1, 2)
    assert json.loads(out)


def test_crosscheck_star5(capsys):
    code, out, _ = run(["crosscheck", "--instance", "star:5,0", "--formulas", "indec,disj,subseteq,samepd"], capsys)
    assert code == 0
    assert json.loads(out)


def test_exit_codes_for_bounds_and_usage(capsys):
    assert run(["crosscheck", "--instance", "star:5,0", "--bounds.group-order", "0"], capsys)[0] == 2
    assert run(["crosscheck", "--instance", "star:5,0", "--formulas", "bogus"], capsys)[0] == 3
    assert run(["verify", "--lemma", "nosuchlemma"], capsys)[0] == 3
    assert run(["verify", "--lemma", "order0", "--step", "sideways"], capsys)[0] == 3
    assert run(["generate", "notaspec:1"], capsys)[0] == 3


def test_reconstruct_star5_and_abelian_table(capsys, tmp_path):
    assert run(["reconstruct", "--instance", "star:5,0"], capsys)[0] == 0
    n = 6
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    path = tmp_path / "c6.json"
    path.write_text(json.dumps({"order": n, "table": table}))
    code, out, _ = run(["reconstruct", "--table", str(path)], capsys)
    assert code == 0
    assert json.loads(out)


def test_output_is_deterministic(capsys):
    argv = ["reconstruct", "--instance", "ball:2,2,2"]
    first = run(argv, capsys)
    second = run(argv, capsys)
    assert first == second
    assert np.all(np.array(first[0]) == 0)
