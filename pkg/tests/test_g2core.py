import numpy as np
import pytest
from hypothesis import given, strategies as st

from g2kit.g2core import (ALPHA, BETA, POSITIVE, ROOTS, SUPPORT_WORDS, WEYL_WORDS, Bruhat,
                          NotInG2, commutator_check, group, inversion_set, reduce_word,
                          root_map_check, weyl_act)

QS = [3, 5, 7, 9]


def eq(a, b):
    return np.array_equal(np.asarray(a), np.asarray(b))


def test_root_system_shape():
    assert len(ROOTS) == 12 and len(POSITIVE) == 6
    assert len(WEYL_WORDS) == 12
    assert sorted(len(w) for w in WEYL_WORDS) == [0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6]
    for w in WEYL_WORDS:
        assert len(inversion_set(w)) == len(w)
    assert reduce_word("ababab") == reduce_word("bababa")


@pytest.mark.parametrize("q", QS)
def test_root_maps(q):
    r = root_map_check(q)
    assert r["roots"] == 12 and r["ok"], r["failures"]


def test_x_zero_is_identity():
    G = group(5)
    for g in ROOTS:
        assert eq(G.x(g, 0), G.I)


def test_x_beta_display():
    G = group(7)
    for r in range(1, 7):
        m = G.x(BETA, r)
        want = G.I.copy()
        want[0, 1] = r
        want[5, 6] = G.F.neg(r)
        assert eq(m, want)


def test_x_alpha_additive_exhaustive_q5():
    G = group(5)
    F = G.F
    r = np.arange(5)
    lhs = G.mul(G.x(ALPHA, r[:, None]), G.x(ALPHA, r[None, :]))
    assert eq(lhs, G.x(ALPHA, F.add(r[:, None], r[None, :])))


@pytest.mark.parametrize("q", [3, 5])
def test_torus(q):
    G = group(q)
    F = G.F
    assert eq(G.h(1, 1), G.I)
    for a in range(1, q):
        for b in range(1, q):
            h = G.h(a, b)
            assert eq(h, G.h_from_roots(a, b))
            assert G.preserves_form(h)
            for x in range(q):
                lhs = G.mul(h, G.x(BETA, x), G.inv(h))
                assert eq(lhs, G.x(BETA, F.mul(F.div(a, b), x)))
    with pytest.raises(ValueError):
        G.h(0, 1)


def test_sl2_torus_in_levi():
    G = group(5)
    F = G.F
    for a in range(1, 5):
        h = G.h(a, F.inv(a))
        assert G.in_M(h)
        assert eq(G.m_embed(np.array([[a, 0], [0, F.inv(a)]])), h)


def test_weyl_elements():
    G = group(5)
    assert eq(G.mul(G.w2, G.w2), G.I)
    wa, wb = G.w(ALPHA), G.w(BETA)
    assert eq(G.w1, G.mul(wb, wa, wb, G.inv(wa), G.inv(wb)))
    assert eq(G.wl, G.mul(wb, G.w2))
    # distinct T-cosets: distinct permutation patterns
    pats = {tuple(np.nonzero(m)[1]) for m in G.weyl_reps.values()}
    assert len(pats) == 12
    assert G.bruhat(G.mul(*[G.mul(wa, wb)] * 3)).word == G.bruhat(G.wl).word


@pytest.mark.parametrize("q", [3, 5])
def test_levi_embedding(q):
    G = group(q)
    F = G.F
    for a, b, c, d in [(1, 1, 0, 1), (0, 1, F.neg(1), 0), (2, 1, 1, 1), (1, 0, 0, q - 1)]:
        m = np.array([[a, b], [c, d]])
        if int(F.sub(F.mul(a, d), F.mul(b, c))) == 0:
            continue
        g = G.m_embed(m)
        assert G.in_g2(g) and G.in_M(g)
    for x in range(q):
        assert eq(G.m_embed(np.array([[1, x], [0, 1]])), G.x(BETA, x))


def test_levi_embedding_exhaustive_gl2_f3():
    G = group(3)
    F = G.F
    n = 0
    for e in np.ndindex(3, 3, 3, 3):
        m = np.array(e).reshape(2, 2)
        if int(F.sub(F.mul(e[0], e[3]), F.mul(e[1], e[2]))) == 0:
            continue
        n += 1
        assert G.in_g2(G.m_embed(m))
    assert n == 48


def test_j_twist():
    G = group(5)
    assert eq(G.j_twist(G.I), G.I)
    for r in range(5):
        n = G.m_embed(np.array([[1, r], [0, 1]]))
        assert eq(G.j_twist(n), G.x((3, 2), r))


def test_bruhat_special_points():
    G = group(3)
    d = G.bruhat(G.I)
    assert d.word == "" and tuple(d.t) == (1, 1) and not any(d.u) and not d.up
    d = G.bruhat(G.wl)
    assert d.word == reduce_word("ababab") and tuple(d.t) == (1, 1)
    assert not any(d.u) and not any(d.up)


def test_bruhat_rejects_non_g2():
    G = group(3)
    g = G.I.copy()
    g[0, 6] = 1
    with pytest.raises(NotInG2):
        G.bruhat(g)
    assert not G.in_g2(g)


@given(st.sampled_from([3, 5, 7]), st.integers(0, 11), st.lists(st.integers(0, 10 ** 6), min_size=14, max_size=14))
def test_bruhat_round_trip(q, wi, raw):
    G = group(q)
    w = WEYL_WORDS[wi]
    u = tuple(x % q for x in raw[:6])
    t = (1 + raw[6] % (q - 1), 1 + raw[7] % (q - 1))
    up = tuple(x % q for x in raw[8:8 + len(w)])
    g = G.compose(Bruhat(u, t, w, up))
    d = G.bruhat(g)
    assert (tuple(d.u), tuple(d.t), d.word, tuple(d.up)) == (u, t, w, up)
    u2, t2, widx, up2 = G.bruhat_many(g[None])
    assert WEYL_WORDS[widx[0]] == w and tuple(t2[0]) == t


@pytest.mark.parametrize("q", QS)
def test_cell_sizes(q):
    G = group(q)
    s = G.cell_sizes()
    assert sum(s.values()) == G.order()
    b = q ** 6 * (q - 1) ** 2
    assert all(s[w] == b * q ** len(w) for w in WEYL_WORDS)
    if q == 3:
        assert G.order() == 4245696


def test_coset_enumeration_counts():
    G = group(3)
    assert len(G.enumerate_cosets("B")) == 1456
    assert len(G.enumerate_cosets("U")) == 5824
    R = G.enumerate_cosets("U_H")
    assert len(R) == 52416
    with pytest.raises(ValueError):
        G.enumerate_cosets("P")


def test_u_cosets_distinct():
    G = group(3)
    R = G.enumerate_cosets("U")
    u, t, widx, up = G.bruhat_many(R)
    assert not u.any()
    keys = {(int(a), int(b), int(c), tuple(v)) for (a, b), c, v in zip(t, widx, up)}
    assert len(keys) == len(R)


@pytest.mark.slow
def test_full_census_q3():
    G = group(3)
    r = G.census()
    assert r["total"] == r["distinct"] == r["expected"] == 4245696
    assert r["per_cell"] == G.cell_sizes()


@pytest.mark.parametrize("q", [5, 7])
def test_commutators(q):
    r = commutator_check(q)
    assert r["ok"], r["failures"]
    c = r["constants"]
    assert c["[b,3a+2b]"] == {} and c["[3a+b,3a+2b]"] == {}


def test_commutator_constants_agree_across_fields():
    # integer constants lie in [-3, 3]; at q = 5 only their residues are visible
    c5, c7, c11 = (commutator_check(q)["constants"] for q in (5, 7, 11))
    assert c7 == c11
    assert c5.keys() == c7.keys()
    for k in c7:
        assert {e: v % 5 for e, v in c5[k].items()} == {e: v % 5 for e, v in c7[k].items()}


def test_weyl_action_permutes_roots():
    for w in WEYL_WORDS:
        assert sorted(weyl_act(w, r) for r in ROOTS) == sorted(ROOTS)


def test_subgroup_membership():
    G = group(3)
    assert G.in_U(G.x(BETA, 1)) and not G.in_U(G.x((0, -1), 1))
    assert G.in_B(G.mul(G.h(2, 1), G.x(ALPHA, 1)))
    assert G.in_Z(G.x((3, 2), 1)) and G.in_V(G.x(ALPHA, 2))
    assert G.in_P(G.m_embed(np.array([[0, 1], [2, 0]])))
    assert G.in_J(G.x((0, -1), 1)) and G.in_J(G.x((3, 1), 2))
    assert G.in_H(G.x((0, 1), 1))
    with pytest.raises(ValueError):
        G.member("nonsense", G.I)


def test_support_words():
    assert len(SUPPORT_WORDS) == 4 and "" in SUPPORT_WORDS
