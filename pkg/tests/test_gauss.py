import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from g2kit.ff import QuadExt, field_of_order
from g2kit.gauss import (LABELS, a_difference, case_of, class_census, classify, classify_t,
                         half_units, mass_check, solve_t, sum_A, sum_family, verify_all, z_value)


def test_case_of():
    assert case_of(3) == case_of(9) == case_of(27) == "p=3"
    assert case_of(7) == case_of(13) == "1mod3"
    assert case_of(5) == case_of(11) == "-1mod3"


def test_a_difference_q3():
    r = a_difference(field_of_order(3), 1)
    assert abs(r.difference - 1j * math.sqrt(3)) < 1e-12


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_a_family(q):
    F = field_of_order(q)
    for a in range(1, q):
        r = a_difference(F, a)
        assert r.ok(1e-8)
        assert abs(1 + 2 * sum_A(F, 1, a) - F.legendre(a) * F.eps_psi * math.sqrt(q)) < 1e-9


@pytest.mark.parametrize("fam,q", [("B", 7), ("B", 13), ("C", 5), ("C", 11),
                                   ("D", 3), ("D", 9), ("D", 27)])
def test_family_closed_forms(fam, q):
    rows = sum_family(fam, q)
    assert len(rows) == len(LABELS[case_of(q)])
    for r in rows:
        assert r.ok(1e-8), r.row()


def test_named_zero_differences():
    assert abs(sum_family("B", 7)[2].difference) < 1e-9
    assert abs(sum_family("C", 5)[3].difference) < 1e-9


def test_family_case_mismatch():
    with pytest.raises(ValueError):
        sum_family("B", 5)
    with pytest.raises(ValueError):
        sum_family("E", 7)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_mass(q):
    r = mass_check(q)
    assert r["ok"], r


def test_verify_all():
    assert verify_all()["ok"]


def test_z_boundary_cases():
    F = field_of_order(7)
    K = QuadExt(F)
    assert solve_t(F, 2) == 1
    assert K.pair(solve_t(F, int(F.neg(2)))) == (6, 0)
    assert classify(F, 1, "1mod3") == "pm1"


@pytest.mark.parametrize("q", [5, 7, 9])
def test_census_counts(q):
    F = field_of_order(q)
    for r in (1, F.kappa):
        c = class_census(F, r)
        assert sum(c.values()) == (q - 1) * len(half_units(F)) == (q - 1) ** 2 // 2


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13])
def test_classification_inversion_stable(q):
    F = field_of_order(q)
    K = QuadExt(F)
    case = case_of(q)
    for r in (1, F.kappa):
        for r3 in range(1, q):
            for r4 in half_units(F):
                t = solve_t(F, z_value(F, r, r3, r4))
                assert classify(F, t, case) == classify(F, K.inv(t), case)


@given(st.sampled_from([5, 7, 11, 13]), st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_t_solves_quadratic(q, a, b):
    F = field_of_order(q)
    K = QuadExt(F)
    r3, r4 = 1 + a % (q - 1), 1 + b % (q - 1)
    z = z_value(F, 1, r3, r4)
    c = classify_t(F, 1, r3, r4)
    t = c.t
    assert K.add(t, K.inv(t)) == K.embed(z)
    assert c.label in LABELS[case_of(q)]
    with pytest.raises(ValueError):
        classify_t(F, 1, 0, r4)
