from fractions import Fraction

import pytest

from g2kit.chartab import (UnusedCell, combination_checks, evaluate, pairing, pairing_report,
                           restricted_table, row_key, theta5_expected, unit_invariance)
from g2kit.jclasses import classes


def table(case, q):
    return {f.name: f for f in restricted_table(case, q)}


def test_degrees():
    t = table("p>3", 5)
    assert t["X2"].degree(5) == 10416
    for q in (5, 7, 11, 13):
        for f in restricted_table("p>3", q):
            d = f.degree(q)
            # the Y_i are class functions vanishing at 1, not characters
            assert d.denominator == 1 and (d > 0 if f.name[0] == "X" else d == 0)
    for q in (3, 9):
        for f in restricted_table("p=3", q):
            d = f.degree(q)
            assert d.denominator == 1 and d > 0


def test_printed_cells():
    q = 7
    t = table("p>3", q)
    assert t["X6"].value("(0,0,0,0,1)", q) == -(q + 1) * (q * q - 1)
    assert table("p=3", 9)["theta5"].value("h(x,1/x)", 9) == 9


def test_blank_cell_is_an_error():
    t = table("p>3", 5)
    with pytest.raises(UnusedCell):
        t["X2"].value("elliptic", 5)
    with pytest.raises(KeyError):
        t["X2"].value("no such row", 5)


def test_case_errors():
    with pytest.raises(ValueError):
        restricted_table("p>3", 9)
    with pytest.raises(ValueError):
        restricted_table("p=3", 5)


def test_expression_evaluator_is_restricted():
    assert evaluate("(q**2-1)/(q+1)", 5) == 4
    with pytest.raises(Exception):
        evaluate("__import__('os')", 5)


def test_every_class_has_a_row():
    for q, case in ((5, "p>3"), (7, "p>3"), (3, "p=3"), (9, "p=3")):
        keys = {row_key(r, q) for r in classes(q).records}
        for f in restricted_table(case, q):
            assert keys <= set(f.entries), f.name


@pytest.mark.parametrize("q", [5, 7])
def test_p_gt_3_pairings(q):
    for name, want in [("X2", 1), ("X3", 1), ("X6", 1), ("Y1", 0), ("Y2", 0), ("Y3", 0), ("Y4", 0)]:
        f = table("p>3", q)[name]
        for j in range(q - 1):
            for path in ("brute", "closed"):
                r = pairing(f, j, q, path)
                assert abs(r.value - want) < 1e-6, (name, j, path, r.value)


@pytest.mark.parametrize("q", [3, 9])
def test_p_3_pairings(q):
    t = table("p=3", q)
    for j in range(q - 1):
        for n in ("chi12", "chi13", "chi14"):
            assert abs(pairing(t[n], j, q).value - 1) < 1e-6
        for n in ("theta10", "theta11", "theta12"):
            assert abs(pairing(t[n], j, q).value) < 1e-6
        r = pairing(t["theta5"], j, q)
        assert abs(r.value - float(theta5_expected(q, j))) < 1e-6


def test_theta5_dichotomy():
    assert theta5_expected(3, 1) == Fraction(2)
    assert theta5_expected(3, 0) == Fraction(1)
    assert {theta5_expected(9, j) for j in range(8)} == {Fraction(1), Fraction(2)}


def test_combinations_q5():
    r = combination_checks(5)
    assert r["ok"]
    assert {row["name"] for row in r["rows"]} == {"X33", "X17"}


@pytest.mark.parametrize("q", [3, 5, 7])
def test_unit_parameters_do_not_matter(q):
    case = "p=3" if q == 3 else "p>3"
    for f in restricted_table(case, q):
        assert unit_invariance(f, q)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_pairing_report(q):
    r = pairing_report(q)
    assert r["ok"]
    assert ("combinations" in r) == (q != 3)


@pytest.mark.slow
@pytest.mark.parametrize("q", [9, 11, 13])
def test_pairing_report_larger_fields(q):
    assert pairing_report(q)["ok"]
