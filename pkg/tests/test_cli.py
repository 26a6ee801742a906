import json
from fractions import Fraction

import numpy as np
import pytest
from click.testing import CliRunner

from g2kit.cli import SCHEMA, jsonable, main


def invoke(*args):
    return CliRunner().invoke(main, list(args))


def report(res):
    # stderr carries only the summary line; stdout is the JSON document
    return json.loads(res.stdout)


def test_gauss_suite_passes_at_q7():
    res = invoke("gauss", "--q", "7")
    assert res.exit_code == 0, res.output
    doc = report(res)
    assert doc["schema"] == SCHEMA
    assert doc["config"]["q"] == 7 and doc["config"]["p"] == 7 and doc["config"]["f"] == 1
    assert doc["summary"]["failed"] == 0 and doc["summary"]["checks"] > 0


def test_pairings_rows_at_q5():
    res = invoke("pairings", "--q", "5")
    assert res.exit_code == 0, res.output
    rows = [c for c in report(res)["checks"] if c["name"].startswith("<X")]
    assert rows and all(c["got"] == pytest.approx([1.0, 0.0]) and c["pass"] for c in rows)


def test_run_suite_matches_subcommand():
    a = invoke("gauss", "--q", "5")
    b = invoke("run", "--suite", "gauss", "--q", "5")
    assert a.exit_code == b.exit_code == 0
    assert a.stdout == b.stdout


@pytest.mark.parametrize("q", ["12", "4", "1"])
def test_bad_field_order_is_a_usage_error(q):
    assert invoke("gauss", "--q", q).exit_code == 2


def test_unknown_suite_is_a_usage_error():
    assert invoke("run", "--suite", "nope", "--q", "3").exit_code == 2


def test_converse_outside_q3_is_a_usage_error():
    assert invoke("converse", "--q", "5").exit_code == 2


def test_gamma_gl2_outside_q3_is_a_usage_error():
    assert invoke("gamma-gl2", "--q", "5").exit_code == 2


def test_chi_out_of_range_is_a_usage_error():
    assert invoke("gamma-gl1", "--q", "3", "--chi", "7").exit_code == 2


def test_reports_are_byte_identical():
    a = invoke("gamma-gl1", "--q", "3", "--seed", "4")
    b = invoke("gamma-gl1", "--q", "3", "--seed", "4")
    assert a.exit_code == 0
    assert a.stdout == b.stdout


def test_small_budget_skips_the_census():
    res = invoke("chevalley", "--q", "3", "--budget", "1000")
    assert res.exit_code == 0, res.output
    doc = report(res)
    census = [c for c in doc["checks"] if c["name"] == "full group census"]
    assert census and census[0]["pass"] is None and "budget" in census[0]["skipped"]
    assert doc["summary"]["skipped"] >= 1


def test_timings_are_opt_in():
    plain = report(invoke("gauss", "--q", "3"))
    timed = report(invoke("gauss", "--q", "3", "--timings"))
    assert all("runtime" not in c for c in plain["checks"])
    assert all("runtime" in c for c in timed["checks"])


def test_out_writes_the_report(tmp_path):
    path = tmp_path / "r.json"
    res = invoke("gauss", "--q", "3", "--out", str(path))
    assert res.exit_code == 0
    assert res.stdout == ""
    assert json.loads(path.read_text())["config"]["suite"] == "gauss"


def test_jsonable_handles_numeric_types():
    x = {1: complex(0.5, -1 / 3), "f": Fraction(2, 3), "n": np.int64(4),
         "a": np.array([1.0, 2.0]), "b": np.bool_(True), "z": np.complex128(1j), "t": (1, 2)}
    got = jsonable(x)
    assert got == {"1": [0.5, -0.3333333333], "f": "2/3", "n": 4, "a": [1.0, 2.0],
                   "b": True, "z": [0.0, 1.0], "t": [1, 2]}
    json.dumps(got)


def test_negative_zero_is_normalized():
    assert jsonable(complex(-0.0, -1e-13)) == [0.0, 0.0]
    assert str(jsonable(-1e-13)) == "0.0"


def test_converse_same_seed_reports_equal():
    res = invoke("converse", "--q", "3", "--seedA", "2", "--seedB", "2")
    assert res.exit_code == 0, res.output
    row = [c for c in report(res)["checks"] if c["name"].startswith("converse verdict")][0]
    assert row["got"]["verdict"] == "equal"


@pytest.mark.slow
def test_all_suites_at_q3():
    res = invoke("run", "--suite", "all", "--q", "3")
    assert res.exit_code == 0, res.output
    doc = report(res)
    assert doc["summary"]["failed"] == 0
    suites = {c["anchor"] for c in doc["checks"]}
    assert "converse theorem" in suites and "w2-cell zeta sum" in suites
