import numpy as np
import pytest

from g2kit.bessel import BesselLike, admissible_tori, random_bessel_like
from g2kit.ff import field_of_order
from g2kit.g2core import W1_WORD, W2_WORD, W_LONG
from g2kit.gamma_gl1 import (coset_reps, delta0, f0, gamma_closed, gamma_fe, gamma_table,
                             ginzburg_Z, invariance_check, normalized_zeta, ratio_diagnostic)


@pytest.mark.parametrize("q", [3, 5])
def test_coset_reps(q):
    F = field_of_order(q)
    reps = coset_reps(F)
    assert len(reps) == (q - 1) * (q + 1)
    assert len(set(reps)) == len(reps)


@pytest.mark.parametrize("seed", range(20))
def test_normalized_zeta_sum_is_one(seed):
    assert abs(normalized_zeta(random_bessel_like(3, seed)) - 1) < 1e-9


@pytest.mark.parametrize("q", [5, 7])
def test_normalized_zeta_sum_larger_q(q):
    for seed in range(3):
        for j in range(q - 1):
            assert abs(normalized_zeta(random_bessel_like(q, seed), j) - 1) < 1e-9


def test_zero_test_function():
    B = random_bessel_like(3, 0)
    assert ginzburg_Z(B, np.zeros(3), f0(3, 1), 1) == 0


def test_left_invariance_of_summand():
    B = random_bessel_like(3, 5)
    rng = np.random.default_rng(0)
    phi = rng.normal(size=3) + 1j * rng.normal(size=3)
    f = rng.normal(size=4) + 1j * rng.normal(size=4)
    for j in range(2):
        assert np.isclose(ginzburg_Z(B, phi, f, j), ginzburg_Z(B, phi, f, j, full=True))


@pytest.mark.parametrize("seed", range(20))
def test_gamma_two_ways_q3(seed):
    B = random_bessel_like(3, seed)
    for j in range(2):
        assert abs(gamma_fe(B, j).value - gamma_closed(B, j).value) < 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_gamma_two_ways_q5(seed):
    B = random_bessel_like(5, seed)
    for j in range(4):
        assert abs(gamma_fe(B, j).value - gamma_closed(B, j).value) < 1e-7


def test_gamma_two_ways_q7():
    B = random_bessel_like(7, 0)
    for j in range(6):
        assert abs(gamma_fe(B, j).value - gamma_closed(B, j).value) < 1e-7


def test_identity_only_gives_zero():
    B = random_bessel_like(5, 0, support_mask=("",))
    for j in range(4):
        assert abs(gamma_closed(B, j).value) < 1e-12
        assert abs(gamma_fe(B, j).value) < 1e-9


def test_vanishing_on_w1_cell_gives_zero_both_ways():
    B = random_bessel_like(5, 3, support_mask=("", W2_WORD, W_LONG))
    for j in range(4):
        assert abs(gamma_closed(B, j).value) < 1e-12
        assert abs(gamma_fe(B, j).value) < 1e-9


def test_single_point_closed_form():
    q = 3
    F = field_of_order(q)
    B = BesselLike(q, {("", 1, 1): 1.0, (W1_WORD, 1, 1): 1.0})
    for j in range(2):
        want = q ** 2.5 / F.eps_psi
        assert abs(gamma_closed(B, j).value - want) < 1e-9
        assert abs(gamma_fe(B, j).value - want) < 1e-8


def test_chi_enters_through_weights_only():
    q = 5
    F = field_of_order(q)
    B = random_bessel_like(q, 9)
    w1 = np.array([B.value_tw(W1_WORD, t) for t in admissible_tori(q, W1_WORD)])
    a = [t[0] for t in admissible_tori(q, W1_WORD)]
    for j in range(4):
        w = F.legendre(np.array(a)) * np.conj(F.chi(j, np.array(a)))
        assert np.isclose(gamma_closed(B, j).value, q ** 2.5 / F.eps_psi * (w1 * w).sum())
    assert np.isclose(gamma_closed(B, 1).value, gamma_closed(B, 5).value)


@pytest.mark.parametrize("seed", range(3))
def test_invariance(seed):
    B = random_bessel_like(3, seed)
    for j in range(2):
        r = invariance_check(B, j, 30, seed)
        assert r["max_error"] < 1e-8


def test_invariance_needs_the_conjugated_sl2():
    B = random_bessel_like(3, 0)
    assert invariance_check(B, 1, 30, 0, d1=False)["max_error"] > 1e-3


def test_ratio_is_only_a_diagnostic():
    r = ratio_diagnostic(random_bessel_like(3, 1), 0, 5, 0)
    assert r["trials"] == 5 and r["max_deviation"] >= 0


def test_gamma_table_rows():
    rows = gamma_table(3, 4)
    assert [r["chi"] for r in rows] == [0, 1]
    assert all(r["error"] < 1e-8 for r in rows)
    assert gamma_fe(random_bessel_like(3, 4), 0).row()["method"] == "functional-equation"


def test_delta0():
    d = delta0(5)
    assert d[0] == 1 and not d[1:].any()
