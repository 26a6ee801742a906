"""G2 x GL2 machinery inside SO7.

P~ is the stabilizer in SO7 of the isotropic plane spanned by e0, e1; its
Levi part is GL2 x SO3 and its unipotent radical U~ has q^7 elements.  For
a generic tau of GL2 with a psi^-1 Whittaker function W = W_v the section
f(g, a) = W(a a(g)) on P~ (zero off P~) restricts to G2 with support
H = G2 cap P~.  The zeta sum is

    Psi(B, f) = sum over g in U_H\\G2 of B(g) f(g, I2)

and M_w2 f(g, a) = sum over u in U~ of f(w2 u g, d1 a*).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bessel import BesselLike
from .g2core import W2_WORD, WEYL_WORDS, Q_INT, group
from .smallrep import (GL2Irrep, gl2_generic_irreps, gl2_group, m_embed_many,
                       whittaker_basis)

# d1 = diag(-1, 1) where M_w2 is defined; the star in W_v* is printed with
# diag(1, -1).  The two differ by the central element -1.
D1 = (-1, 1)
D1_ALT = (1, -1)


# -- P~ and U~ -------------------------------------------------------------

def ptilde_membership(g):
    """a(g), the top-left 2x2 block, if g stabilizes span(e0, e1); else None."""
    g = np.asarray(g)
    if np.any(g[2:, 0:2] != 0):
        return None
    return g[0:2, 0:2].copy()


def in_ptilde_many(g) -> np.ndarray:
    g = np.asarray(g)
    return ~np.any(g[..., 2:, 0:2] != 0, axis=(-1, -2))


_PAIRS = [(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4)]


@lru_cache(maxsize=None)
def utilde_basis(q: int) -> np.ndarray:
    """Seven nilpotent matrices spanning the Lie algebra of U~.

    Each is E_ij - (s_i / s_j') E_j'i' with i' = 6 - i and s the
    antidiagonal of Q, the combination making Q n antisymmetric."""
    F = group(q).F
    s = [F.elt(int(Q_INT[i, 6 - i])) for i in range(7)]
    out = np.zeros((7, 7, 7), dtype=np.int64)
    for k, (i, j) in enumerate(_PAIRS):
        jp, ip = 6 - j, 6 - i
        out[k, i, j] = 1
        out[k, jp, ip] = F.neg(F.div(s[i], s[jp]))
    return out


@lru_cache(maxsize=None)
def utilde_g2(q: int) -> np.ndarray:
    """U~ cap G2: the q^2 elements that are also in U of G2."""
    G = group(q)
    U = utilde(q)
    return U[[i for i in range(len(U)) if G.peel(U[i]) is not None]]


@lru_cache(maxsize=None)
def utilde(q: int) -> np.ndarray:
    """All q^7 elements of U~ as exp(n) = 1 + n + n^2/2."""
    G = group(q)
    F = G.F
    basis = utilde_basis(q)
    coeffs = G.field_grid(7)
    n = np.zeros((len(coeffs), 7, 7), dtype=np.int64)
    for k in range(7):
        n = F.add(n, F.mul(coeffs[:, k, None, None], basis[k][None]))
    n2 = F.matmul(n, n)
    half = F.inv(F.elt(2))
    return F.add(F.add(np.broadcast_to(G.I, n.shape), n), F.mul(half, n2))


# -- sections ----------------------------------------------------------------

@dataclass
class Section:
    """f(g, a) = W(a a(g)) for g in P~, W a psi^-1 Whittaker function of tau."""
    q: int
    rep: GL2Irrep
    W: np.ndarray = field(repr=False)     # values on GL2, indexed as gl2_group(q)
    vector: int | None = None

    @property
    def label(self) -> str:
        return self.rep.label if self.vector is None else f"{self.rep.label}#{self.vector}"

    def whittaker(self, m) -> np.ndarray:
        """W on a batch of 2x2 matrices."""
        Gl = gl2_group(self.q)
        return self.W[Gl.index_many(np.asarray(m, dtype=np.int64))]

    def value_many(self, gs, a=None) -> np.ndarray:
        gs = np.asarray(gs).reshape(-1, 7, 7)
        F = group(self.q).F
        ok = in_ptilde_many(gs)
        out = np.zeros(len(gs), dtype=complex)
        if ok.any():
            blocks = gs[ok, 0:2, 0:2]
            if a is not None:
                blocks = F.matmul(np.asarray(a), blocks)
            out[ok] = self.whittaker(blocks)
        return out

    def value(self, g, a=None) -> complex:
        return complex(self.value_many(np.asarray(g)[None], a)[0])


def section_from_vector(q: int, rep: GL2Irrep, k: int = 0) -> Section:
    """The section attached to the k-th vector of a Whittaker basis of tau."""
    _, rows = whittaker_basis(q, rep)
    return Section(q, rep, rows[k], k)


def sections(q: int, rep: GL2Irrep) -> list[Section]:
    _, rows = whittaker_basis(q, rep)
    return [Section(q, rep, rows[k], k) for k in range(len(rows))]


def _diag(q: int, d) -> np.ndarray:
    F = group(q).F
    return np.array([[F.elt(d[0]), 0], [0, F.elt(d[1])]], dtype=np.int64)


def star(q: int, m) -> np.ndarray:
    """m* = J (m^-1)^T J, batched."""
    F = group(q).F
    m = np.asarray(m, dtype=np.int64)
    a, b, c, d = m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1]
    di = F.inv(F.sub(F.mul(a, d), F.mul(b, c)))
    out = np.empty_like(m)
    out[..., 0, 0] = F.mul(di, a)
    out[..., 0, 1] = F.mul(di, F.neg(b))
    out[..., 1, 0] = F.mul(di, F.neg(c))
    out[..., 1, 1] = F.mul(di, d)
    return out


def w_star(sec: Section, m, d1=D1) -> np.ndarray:
    """W_v*(m) = W_v(d1 m*)."""
    F = group(sec.q).F
    return sec.whittaker(F.matmul(_diag(sec.q, d1), star(sec.q, m)))


def mw2_many(sec: Section, gs, d1=D1, chunk: int | None = None, extension: str = "H") -> np.ndarray:
    """M_w2(f)(g, I2) = sum over u in U~ of f(w2 u g, d1), for a batch of g in G2.

    extension="H" takes f zero off H and sums over U~ cap G2 only;
    "H-full" runs over all of U~ and tests membership in H term by term;
    "P~" extends f P~-equivariantly."""
    G = group(sec.q)
    F = G.F
    if extension == "H":
        Ut, chunk = utilde_g2(sec.q), chunk or 2048
    elif extension in ("H-full", "P~"):
        Ut, chunk = utilde(sec.q), chunk or 16
    else:
        raise ValueError(f"unknown extension {extension!r}")
    U = F.matmul(G.w2[None], Ut)                     # w2 u
    Gl = gl2_group(sec.q)
    dm = _diag(sec.q, d1)
    gs = np.asarray(gs).reshape(-1, 7, 7)
    out = np.zeros(len(gs), dtype=complex)
    for s in range(0, len(gs), chunk):
        V = gs[s:s + chunk, :, 0:2]                       # images of e0, e1
        Y = F.matmul(U[None], V[:, None])                 # (n, |U|, 7, 2)
        ok = ~np.any(Y[:, :, 2:, :] != 0, axis=(-1, -2))
        for i in range(len(V)):
            hit = np.nonzero(ok[i])[0]
            if extension == "H-full":
                hit = [k for k in hit if G.in_g2(F.matmul(U[k], gs[s + i]))]
            if len(hit):
                idx = Gl.index_many(F.matmul(dm, Y[i, hit, 0:2, :]))
                out[s + i] = sec.W[idx].sum()
    return out


# -- the zeta sum ------------------------------------------------------------

@lru_cache(maxsize=None)
def uh_cosets(q: int) -> np.ndarray:
    return group(q).enumerate_cosets("U_H")


def bessel_on_cosets(B: BesselLike) -> tuple[np.ndarray, np.ndarray]:
    """(reps, values) restricted to the U_H-coset representatives with B != 0."""
    reps = uh_cosets(B.q)
    vals = np.concatenate([B.evaluate_many(reps[s:s + 8192])
                           for s in range(0, len(reps), 8192)])
    nz = np.abs(vals) > 1e-14
    return reps[nz], vals[nz]


def psrs_Psi(B: BesselLike, sec: Section, intertwined: bool = False, d1=D1,
             support=None, extension: str = "H") -> complex:
    """Psi(B, f) by brute force over U_H\\G2; intertwined=True uses M_w2 f."""
    reps, vals = support if support is not None else bessel_on_cosets(B)
    if intertwined:
        fv = mw2_many(sec, reps, d1, extension=extension)
    else:
        fv = sec.value_many(reps)
    return complex((vals * fv).sum())


def collapsed_Psi(B: BesselLike, sec: Section) -> complex:
    """sum over N\\GL2 of B(m) W_v(m), summed over GL2 and divided by q."""
    Gl = gl2_group(B.q)
    G = group(B.q)
    mt = m_embed_many(G, Gl.arr)
    return complex((B.evaluate_many(mt) * sec.W).sum() / B.q)


def w2_cell_sum(B: BesselLike, sec: Section, d1=D1) -> complex:
    """q^3 sum over U_beta\\M of B(m w2) W_v*(m)."""
    Gl = gl2_group(B.q)
    G = group(B.q)
    q = B.q
    pts = G.F.matmul(m_embed_many(G, Gl.arr), G.w2[None])
    s = (B.evaluate_many(pts) * w_star(sec, Gl.arr, d1)).sum() / q
    return complex(q ** 3 * s)


def w2_cell_check(B: BesselLike, sec: Section, d1=D1, rtol: float = 1e-7,
               extension: str = "H", support=None) -> dict:
    lhs = psrs_Psi(B, sec, intertwined=True, d1=d1, support=support, extension=extension)
    rhs = w2_cell_sum(B, sec, d1)
    err = abs(lhs - rhs) / max(1.0, abs(rhs))
    return {"tau": sec.label, "lhs": lhs, "rhs": rhs, "rel_error": err, "ok": err <= rtol}


# -- the intertwined section on P w2 P -----------------------------------------

def u_beta_transversal(q: int) -> np.ndarray:
    """One GL2 element per coset N m: the lowest index in each orbit."""
    Gl = gl2_group(q)
    seen = np.zeros(Gl.n, dtype=bool)
    out = []
    for i in range(Gl.n):
        if seen[i]:
            continue
        orbit = Gl.mul_table[Gl.N, i]
        seen[orbit] = True
        out.append(i)
    return Gl.arr[np.array(out)]


def intertwined_section_points(q: int, zs=None):
    """Points m x_a(r1) x_{a+b}(r2) w2 x_a(s1) x_{a+b}(s2) s' with their labels."""
    G = group(q)
    F = G.F
    ms = u_beta_transversal(q)
    mt = m_embed_many(G, ms)
    grid = G.field_grid(4)
    left = G.u_elt([grid[:, 0], grid[:, 1]], [(1, 0), (1, 1)])
    right = G.u_elt([grid[:, 2], grid[:, 3]], [(1, 0), (1, 1)])
    core = F.matmul(F.matmul(left, G.w2[None]), right)            # (q^4, 7, 7)
    if zs is None:
        zs = G.I[None]
    pts = F.matmul(F.matmul(mt[:, None, None], core[None, :, None]), zs[None, None])
    return ms, grid, pts                                          # (|ms|, q^4, |zs|, 7, 7)


def intertwined_section_check(sec: Section, d1=D1, d1_star=D1, zs=None, tol: float = 1e-8,
                  extension: str = "H") -> dict:
    """Both clauses: vanishing unless r = s = 0, and the value W_v*(m) at r = s = 0."""
    q = sec.q
    ms, grid, pts = intertwined_section_points(q, zs)
    shape = pts.shape[:3]
    vals = mw2_many(sec, pts.reshape(-1, 7, 7), d1, extension=extension).reshape(shape)
    zero = np.all(grid == 0, axis=1)
    vanish = float(np.abs(vals[:, ~zero]).max()) if (~zero).any() else 0.0
    want = w_star(sec, ms, d1_star)
    value = float(np.abs(vals[:, zero][:, 0] - want[:, None]).max())
    return {"tau": sec.label, "points": int(np.prod(shape)), "extension": extension, "d1": list(d1),
            "d1_star": list(d1_star), "max_offdiag": vanish, "max_value_error": value,
            "ok": vanish <= tol and value <= tol}


# -- gamma -----------------------------------------------------------------

@dataclass
class GammaGL2:
    tau: str
    q: int
    value: complex | None
    per_vector: list = field(default_factory=list)

    def row(self) -> dict:
        def c(z):
            return None if z is None else [round(z.real, 10) + 0.0, round(z.imag, 10) + 0.0]
        return {"tau": self.tau, "q": self.q, "value": c(self.value),
                "per_vector": [{"vector": k, "gamma": c(g)} for k, g in self.per_vector]}


class DegenerateInput(ValueError):
    pass


def gamma_gl2(B: BesselLike, rep: GL2Irrep, d1=D1, all_vectors: bool = False) -> GammaGL2:
    """Psi(B, M_w2 f) / Psi(B, f) over the vectors of a Whittaker basis.

    The first vector with a nonzero denominator gives the value; with
    all_vectors every such vector is reported."""
    support = bessel_on_cosets(B)
    per = []
    for sec in sections(B.q, rep):
        den = psrs_Psi(B, sec, support=support)
        if abs(den) < 1e-9:
            continue
        num = psrs_Psi(B, sec, intertwined=True, d1=d1, support=support)
        per.append((sec.vector, num / den))
        if not all_vectors:
            break
    if not per:
        raise DegenerateInput(f"Psi(B, f) = 0 for every test section of {rep.label}")
    return GammaGL2(rep.label, B.q, per[0][1], per)


def representative_taus(q: int) -> list[GL2Irrep]:
    """One generic tau of each kind: principal series, Steinberg, cuspidal."""
    out = {}
    for r in gl2_generic_irreps(q):
        out.setdefault(r.kind, r)
    return [out[k] for k in ("ps", "st", "cusp") if k in out]


# -- the decomposition into four P double cosets --------------------------

PARABOLIC_WORDS = {"P": "", "PwaP": "a", "PwawbwaP": "aba", "Pw2P": W2_WORD}


def double_coset_words(word: str) -> list[str]:
    """Bruhat cells B w' B making up P w P, with W_P = {1, s_beta}."""
    from .g2core import reduce_word
    return sorted({reduce_word(x + word + y) for x in ("", "b") for y in ("", "b")},
                  key=WEYL_WORDS.index)


def parabolic_census(q: int) -> dict:
    """|P| + |P wa P| + |P wa wb wa P| + |P w2 P| = |G2|, two ways.

    Cell route: sum of Bruhat cell sizes.  Orbit route: |P|^2 / |P cap w P w^-1|
    with the intersection counted by enumerating P."""
    G = group(q)
    F = G.F
    sizes = G.cell_sizes()
    cells = {k: double_coset_words(w) for k, w in PARABOLIC_WORDS.items()}
    by_cells = {k: sum(sizes[w] for w in ws) for k, ws in cells.items()}
    # enumerate P = B u B s_b B
    U, T = G.all_U(), G.all_T()
    Bor = F.matmul(U[:, None], T[None]).reshape(-1, 7, 7)
    P = np.concatenate([Bor, F.matmul(Bor[:, None], G.cell_reps("b")[None]).reshape(-1, 7, 7)])
    orbit = {}
    for k, w in PARABOLIC_WORDS.items():
        wr = G.weyl_reps[w]
        conj = F.matmul(F.matmul(G.inv(wr)[None], P), wr[None])
        _, _, widx, _ = G.bruhat_many(conj)
        in_p = np.isin(widx, [WEYL_WORDS.index(""), WEYL_WORDS.index("b")])
        orbit[k] = len(P) ** 2 // int(in_p.sum())
    total = G.order()
    return {"q": q, "cells": cells, "by_cells": by_cells, "by_orbits": orbit,
            "order_P": len(P), "total": total,
            "ok": sum(by_cells.values()) == total == sum(orbit.values())
            and by_cells == orbit}
