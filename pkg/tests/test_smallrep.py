import numpy as np
import pytest
from hypothesis import given, strategies as st

from g2kit.ff import field_of_order
from g2kit.g2core import group
from g2kit.smallrep import (InducedRep, Weil, gl2_characters, gl2_generic_irreps, gl2_group,
                            n_elt, pr_bar, random_J, sl2_elements, sl2_intertwiner, sl2_mul,
                            space_dimension, w_one, weil_J_homomorphism_check,
                            weil_homomorphism_check, weil_on_J, whittaker_basis)


def test_weil_identity_and_torus():
    F = field_of_order(5)
    W = Weil(F)
    assert np.allclose(W.op(), np.eye(5))
    for a in range(1, 5):
        M = W.torus(a)
        for xi in range(5):
            phi = np.zeros(5)
            phi[F.mul(a, xi)] = 1
            assert np.isclose((M @ phi)[xi], F.legendre(a))


def test_weil_exhaustive_q3():
    r = weil_homomorphism_check(3)
    assert r["group_order"] == 648 and r["pairs"] == 648 ** 2
    assert r["max_error"] < 1e-9


def test_weil_sampled_q5():
    r = weil_homomorphism_check(5, samples=20000, seed=1)
    assert r["max_error"] < 1e-9


def test_weil_wrong_gamma_sign_breaks_homomorphism():
    assert weil_homomorphism_check(3, gamma_sign=-1)["max_error"] > 0.1


@pytest.mark.parametrize("q", [3, 5])
def test_weil_on_J_homomorphism(q):
    assert weil_J_homomorphism_check(q, samples=5000, seed=2)["max_error"] < 1e-9


def test_weil_on_J_formulas():
    G = group(5)
    F = G.F
    xi = np.arange(5)
    for b in range(5):
        M = weil_on_J(G, G.x((0, 1), b))
        assert np.allclose(M, np.diag(F.psi(F.mul(b, F.mul(xi, xi)))))
    r1, r3 = 1, 2
    M = weil_on_J(G, G.v_elt(r1, 0, r3, 1, 4))
    for x in xi:
        phi = np.zeros(5, dtype=complex)
        phi[F.add(x, r1)] = 1
        assert np.isclose((M @ phi)[x], F.psi(r3))


def test_pr_bar_rejects_outside_J():
    G = group(3)
    with pytest.raises(ValueError):
        pr_bar(G, G.x((-1, 0), 1))


@pytest.mark.parametrize("q,j", [(3, 0), (3, 1), (5, 1), (5, 2), (7, 3)])
def test_induced_rep(q, j):
    F = field_of_order(q)
    I = InducedRep(F, j)
    assert I.dim == q + 1
    els = sl2_elements(F)
    rng = np.random.default_rng(q * 10 + j)
    for _ in range(20):
        g, h = (els[i] for i in rng.integers(0, len(els), 2))
        assert np.allclose(I.matrix(sl2_mul(F, g, h)), I.matrix(g) @ I.matrix(h))
    for x in range(2, q - 1):
        xi = int(F.inv(x))
        want = F.chi(j, x) + F.chi(j, xi)
        assert np.isclose(I.character((x, 0, 0, xi)), want)


def test_trivial_character_contains_trivial_rep():
    F = field_of_order(5)
    I = InducedRep(F, 0)
    avg = sum(I.character(g) for g in sl2_elements(F)) / len(sl2_elements(F))
    assert np.isclose(avg, 1)


@pytest.mark.parametrize("q,j", [(3, 1), (5, 1), (5, 3), (7, 2)])
def test_intertwiner(q, j):
    F = field_of_order(q)
    I, Iinv = InducedRep(F, j), InducedRep(F, -j)
    M = sl2_intertwiner(F, j)
    Mf0 = M @ I.f0
    assert np.isclose(Mf0[0], 0)
    assert np.allclose(Mf0[1:], 1)
    w = w_one(F)
    for r in range(q):
        assert np.isclose(Iinv.section_value(Mf0, sl2_mul(F, w, n_elt(r))), 1)
    els = sl2_elements(F)
    rng = np.random.default_rng(j)
    for i in rng.integers(0, len(els), 10):
        g = els[i]
        assert np.allclose(M @ I.matrix(g), Iinv.matrix(g) @ M)


@pytest.mark.parametrize("q", [3, 5])
def test_gl2_census(q):
    irr = gl2_generic_irreps(q)
    kinds = [r.kind for r in irr]
    assert kinds.count("ps") == (q - 1) * (q - 2) // 2
    assert kinds.count("st") == q - 1
    assert kinds.count("cusp") == q * (q - 1) // 2
    Gl = gl2_group(q)
    chars = gl2_characters(Gl)
    assert sum(d * d for _, _, d, _ in chars) == Gl.n == (q * q - 1) * (q * q - q)
    X = np.array([c for *_, c in chars])
    gram = X @ X.conj().T / Gl.n
    assert np.allclose(gram, np.eye(len(chars)), atol=1e-8)


def test_gl2_whittaker_functions_q3():
    q = 3
    Gl = gl2_group(q)
    F = Gl.F
    e = Gl.identity
    for rep in gl2_generic_irreps(q):
        W = rep.bessel
        assert np.isclose(W[e], 1)
        for x in range(q):
            for y in range(q):
                n1, n2 = Gl.N[x], Gl.N[y]
                lhs = W[Gl.mul_table[Gl.mul_table[n1], n2]]
                assert np.allclose(lhs, np.conj(F.psi(F.add(x, y))) * W)
        assert space_dimension(q, rep) == rep.dim
        idx, basis = whittaker_basis(q, rep)
        assert len(idx) == rep.dim and np.linalg.matrix_rank(basis) == rep.dim


@given(st.integers(0, 2 ** 32))
def test_random_J_lands_in_J(seed):
    G = group(3)
    for h in random_J(G, 3, np.random.default_rng(seed)):
        assert G.in_J(h)
