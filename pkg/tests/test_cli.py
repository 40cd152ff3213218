import json
from fractions import Fraction

import pytest

from dolharm.cli import main
from dolharm.problem import (canonical_problem, parse_problem,
                             reparse_canonical)
from dolharm.errors import SpecParseError


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_catalog_listing(capsys):
    code, out, _ = run_cli(capsys, "catalog")
    assert code == 0
    for name in ("secondary_kodaira", "inoue_sm", "hyperelliptic_II"):
        assert name in out


def test_catalog_show_requires_params_reports_domain(capsys):
    code, out, _ = run_cli(capsys, "catalog", "hyperelliptic_II")
    assert code == 0
    assert "0 < |t| < 1" in out


def test_catalog_show_unknown(capsys):
    code, _, err = run_cli(capsys, "catalog", "nonexistent")
    assert code == 2
    assert "unknown" in err


def test_catalog_show_full_entry(capsys):
    code, out, _ = run_cli(capsys, "catalog", "primary_kodaira_I", "--param", "alpha=1")
    assert code == 0
    assert "reference b2=2" in out and "b2=4" in out  # discrepancy surfaced


def test_h11_inline_json(capsys):
    code, out, _ = run_cli(capsys, "h11", "--entry", "primary_kodaira_II",
                           "--param", "beta=1", "--metric", "1,1,1/2,0",
                           "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["decision"]["delta"] == 1
    assert doc["decision"]["backend"] == "both"
    assert doc["decision"]["h11_by_provenance"]["paper_reference"] == 2
    assert doc["decision"]["h11_by_provenance"]["ce_computed"] == 3
    code, out, _ = run_cli(capsys, "h11", "--entry", "primary_kodaira_II",
                           "--param", "beta=1", "--metric", "1,1,0,1/4",
                           "--json")
    assert json.loads(out)["decision"]["delta"] == 0


def test_h11_requires_metric(capsys):
    code, _, err = run_cli(capsys, "h11", "--entry", "secondary_kodaira")
    assert code == 2
    assert "metric" in err


def test_validate_rejects_invalid_metric(capsys):
    code, _, err = run_cli(capsys, "validate", "--entry", "secondary_kodaira",
                           "--metric", "1,1,2,0")
    assert code == 2
    assert "|u|^2" in err


def test_validate_passes_catalog(capsys):
    code, out, _ = run_cli(capsys, "validate", "--entry", "secondary_kodaira",
                           "--metric", "1,1,0,0")
    assert code == 0
    assert "d^2=0 ok" in out


def test_validate_custom_structure_failure(capsys, tmp_path):
    doc = {
        "custom": {
            "structure": [
                {"i": 1, "j": 2, "k": 3, "c": "1"},
                {"i": 1, "j": 1, "k": 2, "c": "1"},
                {"i": 2, "j": 1, "k": 3, "c": "1"},
            ],
            "coframe": [
                [["1", "0"], ["0", "0"], ["0", "1"], ["0", "0"]],
                [["0", "0"], ["1", "0"], ["0", "0"], ["0", "1"]],
            ],
        },
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "validate", str(path))
    assert code == 2
    assert "FAILED" in out


def test_ak_scan_json(capsys):
    code, out, _ = run_cli(capsys, "ak-scan", "--entry", "nilmanifold_I", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["almost_kahler"]["status"] == "infeasible"
    assert doc["symplectic"]["status"] == "feasible"
    assert doc["almost_kahler"]["seed"] == 0


def test_report_human_tags_backend(capsys):
    code, out, _ = run_cli(capsys, "report", "--entry", "secondary_kodaira",
                           "--metric", "1,1,0,0", "--backend", "float")
    assert code == 0
    assert "backend=float" in out
    assert "tolerance" in out


def test_backend_disagreement_exit_code(capsys):
    code, _, err = run_cli(capsys, "h11", "--entry", "secondary_kodaira",
                           "--metric", "1,1,0,0", "--tolerance", "1e-30")
    assert code == 3
    assert "disagreement" in err


def test_sweep_matches_h11_spotwise(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "sweep", "--entry", "secondary_kodaira",
                           "--r", "1", "--s", "1", "--u-re=-1/2:1/2",
                           "--u-im=-1/2:1/2", "--steps", "5", "--backend", "exact")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split(",")[0] == "u_im\\u_re"
    grid = {}
    u_res = lines[0].split(",")[1:]
    for line in lines[1:]:
        cells = line.split(",")
        for col, val in zip(u_res, cells[1:]):
            grid[(col, cells[0])] = val
    # row u_im = 0 is all ones, everything else zero
    for (ure, uim), val in grid.items():
        assert val == ("1" if Fraction(uim) == 0 else "0")
    # spot-check against h11 on a few cells
    import random

    rng = random.Random(0)
    for _ in range(20):
        ure = rng.choice(u_res)
        uim = rng.choice([line.split(",")[0] for line in lines[1:]])
        code, out2, _ = run_cli(capsys, "h11", "--entry", "secondary_kodaira",
                                "--metric", f"1,1,{ure},{uim}", "--json",
                                "--backend", "exact")
        assert code == 0
        assert str(json.loads(out2)["decision"]["delta"]) == grid[(ure, uim)]


def test_sweep_marks_invalid_cells(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--entry", "secondary_kodaira",
                           "--r", "1", "--s", "1", "--u-re=0:2", "--u-im=0:0",
                           "--steps", "3", "--backend", "exact")
    assert code == 0
    row = out.strip().splitlines()[1].split(",")
    assert row == ["0", "1", "x", "x"]  # |u| >= rs is rejected, boundary included


def test_sweep_deterministic_and_file_output(capsys, tmp_path):
    args = ("sweep", "--entry", "primary_kodaira_II", "--param", "beta=1",
            "--r", "1", "--s", "1", "--u-re=-1/4:1/4", "--u-im=-1/4:1/4",
            "--steps", "3", "--backend", "exact")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0 and out1 == out2
    target = tmp_path / "grid.csv"
    code3, out3, _ = run_cli(capsys, *args, "--out", str(target))
    assert code3 == 0
    assert target.read_text() == out1


def test_problem_file_roundtrip(tmp_path):
    doc = {
        "catalog": {"name": "inoue_sm", "params": {"alpha": "1", "beta": "-2"}},
        "metric": {"r": "3/2", "s": "1", "u_re": "1/4", "u_im": "-1/8"},
        "options": {"backend": "exact", "b_minus": "ce", "seed": 5},
    }
    problem = parse_problem(doc)
    echo = canonical_problem(problem)
    again = reparse_canonical(echo)
    assert again.lie == problem.lie
    assert again.coframe == problem.coframe
    assert again.metric == problem.metric
    assert again.options == problem.options
    assert canonical_problem(again) == echo


def test_problem_parse_errors_are_located():
    with pytest.raises(SpecParseError) as err:
        parse_problem({"catalog": {"name": "inoue_sm"},
                       "metric": {"r": "1", "s": "1", "u_re": "x", "u_im": "0"}})
    assert "catalog" in str(err.value) or "metric" in str(err.value)
    with pytest.raises(SpecParseError) as err:
        parse_problem({})
    assert "catalog" in str(err.value)
    with pytest.raises(SpecParseError) as err:
        parse_problem({"catalog": {"name": "secondary_kodaira"},
                       "metric": {"r": "1", "s": "1", "u_re": "0"}})
    assert "u_im" in str(err.value)


def test_custom_problem_full_pipeline(capsys, tmp_path):
    # the hyperelliptic structure entered by hand must reproduce the verdict
    doc = {
        "custom": {
            "structure": [
                {"i": 1, "j": 2, "k": 3, "c": "-1"},
                {"i": 2, "j": 1, "k": 3, "c": "1"},
            ],
            "coframe": [
                [["1", "0"], ["0", "0"], ["0", "1"], ["0", "0"]],
                [["0", "0"], ["1", "0"], ["0", "0"], ["0", "1"]],
            ],
        },
        "metric": {"r": "1", "s": "1", "u_re": "0", "u_im": "0"},
    }
    path = tmp_path / "custom.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "h11", str(path), "--json")
    assert code == 0
    report = json.loads(out)
    assert report["decision"]["delta"] == 0
    assert report["decision"]["b_minus_provenance"] == "ce_computed"
    assert report["decision"]["b_minus_used"] == 1


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
