import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from hirschstat import DiscretizedWeibull, ParseError, StudyConfig, run_study
from hirschstat.cli import main
from hirschstat.io import (
    ReportTable,
    emit_table,
    format_set,
    parse_citation_file,
    parse_citation_text,
    render_table,
)

DATA = Path(__file__).parent / "data"
BAD_FILES = sorted(DATA.glob("bad_*"))


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_examples():
    recs = parse_citation_text("ada,12\nada,3\nbo,0")
    assert [(r.scholar_id, r.counts) for r in recs] == [("ada", [12, 3]), ("bo", [0])]
    recs = parse_citation_text('{"cy": [4,4,1]}', "json")
    assert [(r.scholar_id, r.counts) for r in recs] == [("cy", [4, 4, 1])]
    with pytest.raises(ParseError, match="line 1"):
        parse_citation_text("ada,-2")


def test_parse_crlf_header_bom_and_order():
    text = "﻿scholar,count\r\nb,1\r\na,2\r\nb,3\r\n"
    recs = parse_citation_file(io.BytesIO(text.encode("utf-8")))
    assert [(r.scholar_id, r.counts) for r in recs] == [("b", [1, 3]), ("a", [2])]
    assert parse_citation_file(DATA / "good.csv")[2].counts == [4, 4, 1]
    assert [r.counts for r in parse_citation_file(DATA / "good.json")] == [[12, 3], [0], [4, 4, 1]]


@pytest.mark.parametrize("path", BAD_FILES, ids=lambda p: p.name)
def test_malformed_corpus_rejected_with_line(path, capsys):
    code, out, err = run(["compute", path], capsys)
    assert code == 2 and out == ""
    assert "line " in err


def test_format_set():
    assert (format_set(4, 4), format_set(4, 5), format_set(42, 50)) == ("{4}", "{4,5}", "{42,…,50}")


GOLDEN_CI = """\
scholar  n    h   ci
Ada, L.  418  47  {39,…,55}
Bo, K.   104  37  {33,…,41}
Cy, M.   88   30  {25,…,35}
"""


def test_ci_table_layout_golden(capsys):
    code, out, err = run(["ci", DATA / "three_scholars.csv"], capsys)
    assert code == 0 and err == ""
    assert out == GOLDEN_CI


def test_ci_all_zero_scholar_warns(capsys):
    code, out, err = run(["ci", DATA / "good.csv", "--output-format", "json"], capsys)
    assert code == 0
    rows = {r["scholar"]: r for r in json.loads(out)}
    assert (rows["bo"]["h"], rows["bo"]["ci"]) == (0, "{0}")
    assert "warning" in err and "bo" in err


def test_compute_and_test_commands(capsys):
    code, out, _ = run(["compute", DATA / "good.json", "--output-format", "tsv"], capsys)
    assert code == 0 and out.splitlines() == ["scholar\tn\th", "ada\t2\t2", "bo\t1\t0", "cy\t3\t2"]
    code, out, _ = run(["test", DATA / "three_scholars.csv", "--a", "Ada, L.", "--b", "Cy, M.", "--output-format", "json"], capsys)
    (row,) = json.loads(out)
    assert code == 0 and row["t_stat"] > 0 and 0 <= row["p_value"] <= 1 and row["alternative"] == "two-sided"
    code, _, err = run(["test", DATA / "good.csv", "--a", "ada", "--b", "nobody"], capsys)
    assert code == 3 and "nobody" in err
    code, _, err = run(["test", DATA / "good.csv", "--a", "ada", "--b", "ada"], capsys)
    assert code == 4 and "degenerate" in err


def test_moments_command(capsys):
    code, out, _ = run(["moments", "--dist", "discrete-stable", "--alpha", "0.25", "--lambda", "1.0", "--n", "30", "--output-format", "json"], capsys)
    (row,) = json.loads(out)
    assert code == 0 and row["h_n"] == 11
    assert row["exact_mean"] == pytest.approx(11.31, abs=0.005)
    assert row["exact_variance"] == pytest.approx(4.73, abs=0.005)
    assert row["closed_form_variance"] == pytest.approx(7.04, abs=0.005)


def test_pmf_command(capsys):
    code, out, _ = run(["pmf", "--dist", "discrete-stable", "--alpha", "1", "--lambda", "2", "--shift", "0", "--kmax", "3", "--output-format", "json"], capsys)
    rows = json.loads(out)
    assert code == 0 and [r["k"] for r in rows] == [0, 1, 2, 3]
    assert rows[0]["pmf"] == pytest.approx(0.1353352832366127, abs=1e-15)


@pytest.mark.parametrize(
    "argv, code",
    [
        (["moments", "--dist", "discrete-stable", "--alpha", "0.5", "--n", "30"], 2),
        (["moments", "--dist", "discretized-weibull", "--n", "30"], 2),
        (["simulate", "--dist", "discretized-weibull", "--tau", "0.1"], 2),
        (["compute", "x.csv", "--bogus"], 2),
        (["frobnicate"], 2),
        (["moments", "--dist", "discrete-stable", "--alpha", "1.5", "--lambda", "1", "--n", "30"], 3),
        (["moments", "--dist", "discretized-weibull", "--tau", "0.1", "--n", "0"], 3),
        (["ci", DATA / "good.csv", "--level", "1.5"], 3),
        (["pmf", "--dist", "discretized-weibull", "--tau", "0.1", "--kmax", "-1"], 3),
    ],
)
def test_exit_codes(argv, code, capsys):
    try:
        got = main([str(a) for a in argv])
    except SystemExit as exc:
        got = exc.code
    err = capsys.readouterr().err
    assert got == code
    if code == 2:
        assert "usage" in err or "error" in err


def test_unwritable_destination(tmp_path, capsys):
    target = tmp_path / "missing" / "out.tsv"
    code, _, err = run(["compute", DATA / "good.csv", "-o", target], capsys)
    assert code == 1 and str(target) in err


def test_emit_empty_tsv_is_header_only():
    buf = io.StringIO()
    emit_table(ReportTable(["scholar", "n", "h"], []), "tsv", buf)
    assert buf.getvalue() == "scholar\tn\th\n"


def test_study_row_json_round_trip(tmp_path):
    rows = [r.as_dict() for r in run_study(StudyConfig(DiscretizedWeibull(0.1), (30,), 200, 0.95, 1))]
    table = ReportTable(list(rows[0]), rows, {"coverage": "coverage_se"})
    path = tmp_path / "rows.json"
    emit_table(table, "json", path)
    back = json.loads(path.read_text(encoding="utf-8"))
    assert back == rows
    assert {"n", "h_n", "coverage"} <= set(back[0])
    tsv = render_table(table, "tsv").splitlines()
    header = tsv[0].split("\t")
    assert "coverage±" in header and "coverage_se" not in header
    values = dict(zip(header, tsv[1].split("\t")))
    assert float(values["coverage"]) == rows[0]["coverage"]
    assert float(values["exact_var_h"]) == rows[0]["exact_var_h"]


SIM = ["simulate", "--dist", "discretized-weibull", "--tau", "0.4", "--n-list", "30,50", "--reps", "600", "--seed", "5"]


@pytest.mark.parametrize("fmt", ["tsv", "json"])
def test_simulate_byte_identical(fmt, capsys):
    outs = []
    for jobs in ("1", "1", "4"):
        code, out, _ = run(SIM + ["--output-format", fmt, "--jobs", jobs], capsys)
        assert code == 0
        outs.append(out.encode("utf-8"))
    assert outs[0] == outs[1] == outs[2]


def test_module_entry_point_and_env_jobs(tmp_path):
    env = dict(os.environ, HINDEX_JOBS="2")
    cmd = [sys.executable, "-m", "hirschstat"] + SIM + ["--output-format", "tsv"]
    a = subprocess.run(cmd, env=env, capture_output=True, check=True).stdout
    env["HINDEX_JOBS"] = "1"
    b = subprocess.run(cmd, env=env, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"law\tn\t")
