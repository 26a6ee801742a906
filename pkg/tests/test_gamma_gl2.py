import numpy as np
import pytest

from g2kit.bessel import random_bessel_like
from g2kit.g2core import W2_WORD, W_LONG, group
from g2kit.gamma_gl2 import (D1, D1_ALT, DegenerateInput, bessel_on_cosets, collapsed_Psi,
                             double_coset_words, gamma_gl2, in_ptilde_many,
                             intertwined_section_check, mw2_many, parabolic_census,
                             ptilde_membership, psrs_Psi, representative_taus, sections, star,
                             u_beta_transversal, utilde, utilde_g2, w2_cell_check, w2_cell_sum)
from g2kit.smallrep import gl2_group

Q = 3


@pytest.fixture(scope="module")
def taus():
    return representative_taus(Q)


@pytest.fixture(scope="module")
def w2_mock():
    B = random_bessel_like(Q, 0, support_mask=("ababa", "ababab"), normalized=False)
    return B, bessel_on_cosets(B)


def test_representatives_cover_each_kind(taus):
    assert [t.kind for t in taus] == ["ps", "st", "cusp"]


def test_ptilde_membership():
    G = group(Q)
    F = G.F
    for m in ([[1, 1], [0, 1]], [[0, 1], [2, 0]], [[2, 1], [1, 1]]):
        m = np.array(m)
        assert np.array_equal(ptilde_membership(G.m_embed(m)), m)
    assert ptilde_membership(G.w2) is None
    for z in (G.x((2, 1), 1), G.x((3, 1), 2), G.x((3, 2), 1)):
        assert np.array_equal(ptilde_membership(z), np.eye(2, dtype=np.int64))
    assert in_ptilde_many(np.stack([G.I, G.w2])).tolist() == [True, False]


def test_utilde():
    G = group(Q)
    U = utilde(Q)
    assert len(U) == Q ** 7
    assert G.preserves_form(U)
    assert in_ptilde_many(U).all()
    # distinct elements, all unipotent with a(u) = 1
    assert len({u.tobytes() for u in U}) == Q ** 7
    assert (U[:, 0:2, 0:2] == np.eye(2, dtype=np.int64)).all()
    assert len(utilde_g2(Q)) == Q ** 2


def test_h_membership_agrees_with_g2core():
    G = group(Q)
    R = G.enumerate_cosets("U")[::97]
    for g in R:
        assert G.in_H(g) == (ptilde_membership(g) is not None)


def test_star_and_w2():
    G = group(Q)
    Gl = gl2_group(Q)
    assert np.array_equal(G.mul(G.w2, G.w2), G.I)
    m = Gl.arr
    assert np.array_equal(star(Q, star(Q, m)), m)
    for k in range(0, Gl.n, 7):
        g = G.m_embed(m[k])
        assert np.array_equal(g[5:7, 5:7], star(Q, m[k]))


def test_section_is_equivariant_under_uh(taus):
    G = group(Q)
    F = G.F
    sec = sections(Q, taus[2])[0]
    rng = np.random.default_rng(0)
    R = G.enumerate_cosets("U_H")[rng.integers(0, 52416, 40)]
    for g in R:
        b, z1, z2, z3 = (int(v) for v in rng.integers(0, Q, 4))
        u = G.u_elt([b, z1, z2, z3], [(0, 1), (2, 1), (3, 1), (3, 2)])
        want = complex(np.conj(F.psi(b))) * sec.value(g)
        assert np.isclose(sec.value(G.mul(u, g)), want)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_intertwined_section(taus, k):
    for sec in sections(Q, taus[k]):
        r = intertwined_section_check(sec)
        assert r["ok"], r
        assert r["max_offdiag"] == 0 and r["max_value_error"] < 1e-12


@pytest.mark.slow
def test_intertwined_section_full_unipotent_sum(taus):
    for tau in taus:
        sec = sections(Q, tau)[0]
        assert intertwined_section_check(sec, extension="H-full")["ok"]


def test_ptilde_extension_breaks_the_vanishing(taus):
    r = intertwined_section_check(sections(Q, taus[2])[0], extension="P~")
    assert r["max_offdiag"] > 1e-3


def test_other_d1_sign_in_the_star_fails_off_steinberg(taus):
    ps, st, cu = (sections(Q, t)[1] for t in taus)
    assert not intertwined_section_check(ps, d1_star=D1_ALT)["ok"]
    assert not intertwined_section_check(cu, d1_star=D1_ALT)["ok"]


def test_unknown_extension(taus):
    with pytest.raises(ValueError):
        mw2_many(sections(Q, taus[0])[0], group(Q).I[None], extension="nope")


def test_w2_cell_sum_formula(taus, w2_mock):
    B, sup = w2_mock
    for tau in taus:
        for sec in sections(Q, tau):
            r = w2_cell_check(B, sec, support=sup)
            assert r["ok"] and r["rel_error"] < 1e-10, r


@pytest.mark.slow
@pytest.mark.parametrize("seed", [1, 2])
def test_w2_cell_sum_other_seeds(taus, seed):
    B = random_bessel_like(Q, seed, support_mask=("ababa", "ababab"), normalized=False)
    sup = bessel_on_cosets(B)
    for tau in taus:
        for sec in sections(Q, tau):
            assert w2_cell_check(B, sec, support=sup)["ok"]


def test_w2_mock_has_no_plain_zeta_sum(taus, w2_mock):
    # zero on M, so the sum of B W over U_H\G2 vanishes
    B, sup = w2_mock
    for tau in taus:
        for sec in sections(Q, tau):
            assert abs(psrs_Psi(B, sec, support=sup)) < 1e-9


def test_collapse_to_gl2():
    B = random_bessel_like(Q, 3)
    sup = bessel_on_cosets(B)
    from g2kit.smallrep import gl2_generic_irreps
    for tau in gl2_generic_irreps(Q):
        for sec in sections(Q, tau):
            assert np.isclose(psrs_Psi(B, sec, support=sup), collapsed_Psi(B, sec))


def test_parabolic_census():
    r = parabolic_census(Q)
    assert r["ok"]
    assert sum(r["by_cells"].values()) == group(Q).order()
    assert double_coset_words("")[0] == "" and double_coset_words(W2_WORD) == [W2_WORD, W_LONG]


def test_transversal():
    T = u_beta_transversal(Q)
    assert len(T) == gl2_group(Q).n // Q


def test_gamma_gl2_per_vector(taus):
    B = random_bessel_like(Q, 5)
    for tau in taus:
        g = gamma_gl2(B, tau, all_vectors=True)
        assert g.per_vector and g.value == g.per_vector[0][1]
        assert g.row()["tau"] == tau.label


def test_degenerate_input(taus):
    B = random_bessel_like(Q, 0, support_mask=(W_LONG,), normalized=False)
    with pytest.raises(DegenerateInput):
        gamma_gl2(B, taus[0])


def test_w2_cell_sum_is_linear(taus):
    A = random_bessel_like(Q, 1)
    C = random_bessel_like(Q, 2)
    sec = sections(Q, taus[1])[0]
    assert np.isclose(w2_cell_sum(A - C, sec), w2_cell_sum(A, sec) - w2_cell_sum(C, sec))
    assert D1 == (-1, 1)
