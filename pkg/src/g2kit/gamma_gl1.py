"""The G2 x GL1 zeta sum and its gamma factor.

Z(W, phi, f) = sum over g in N\\SL2 and x, y in k of
    W(x_{-b}(y) x_{-(a+b)}(x) j(g)) (omega_{psi^-1}(g) phi)(x) f(g)
with j(g) = w_b w_a g w_a^-1 w_b^-1 applied to SL2 inside the Levi M.
With the matrices of g2core the Weil factor sees g through pr_bar, i.e. as
d1 g d1, and x_{-(a+b)}(x) has to be taken as x_{-(a+b)}(-x) for the sum to
be invariant under J; both are sign conventions of the root subgroups.
N\\SL2 is represented by t(a) and t(a) w^1 n(r).

gamma(Pi x chi, psi) is read off from Z(B, delta_0, M f0), whose
denominator Z(B, delta_0, f0) is 1, and compared with the one-sum
closed form over B(h(a, 1) w1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bessel import BesselLike, random_bessel_like
from .ff import FieldSpec, field_of_order
from .g2core import W1_WORD, group
from .smallrep import (InducedRep, Weil, n_elt, pr_bar, random_J, sl2_elements,
                       sl2_intertwiner, sl2_mul, w_one)


@dataclass
class ZetaInputGL1:
    W: object            # BesselLike, or anything with evaluate_many
    phi: np.ndarray      # q values
    f: np.ndarray        # values of a section of I(chi_j) on the representatives
    j: int               # chi = chi_j


@dataclass
class GammaGL1:
    chi: int
    q: int
    value: complex
    method: str

    def row(self) -> dict:
        z = complex(self.value)
        return {"chi": self.chi, "q": self.q, "method": self.method,
                "value": [round(z.real, 10) + 0.0, round(z.imag, 10) + 0.0]}


class _Translated:
    """g -> W(g r) for a fixed matrix r."""

    def __init__(self, W, r):
        self.W, self.r = W, np.asarray(r)

    def evaluate_many(self, gs):
        G = group(self.W.q)
        return self.W.evaluate_many(G.F.matmul(np.asarray(gs), self.r))

    @property
    def q(self):
        return self.W.q


def coset_reps(F: FieldSpec) -> list[tuple]:
    """t(a) and t(a) w^1 n(r): one element per coset N g."""
    w = w_one(F)
    out = []
    for a in range(1, F.q):
        t = (a, 0, 0, int(F.inv(a)))
        out.append(t)
        out.extend(sl2_mul(F, sl2_mul(F, t, w), n_elt(r)) for r in range(F.q))
    return out


@lru_cache(maxsize=None)
def _geometry(q: int, full: bool = False):
    """Points x_{-b}(y) x_{-(a+b)}(x) j(g), shape (len(gs), q, q, 7, 7) flat."""
    G = group(q)
    F = G.F
    gs = sl2_elements(F) if full else coset_reps(F)
    J = np.array([G.j_twist(G.m_embed(np.array(g).reshape(2, 2))) for g in gs])
    x = np.arange(q)
    # x_{-(a+b)} enters with argument -x, see ginzburg_Z
    X = G.mul(G.x((0, -1), x[None, :]), G.x((-1, -1), F.neg(x)[:, None]))  # [x, y]
    pts = F.matmul(X[None], J[:, None, None]).reshape(-1, 7, 7)
    return gs, pts


@lru_cache(maxsize=None)
def _weil_inv(q: int) -> Weil:
    F = field_of_order(q)
    return Weil(F, int(F.neg(1)))


def _d1(F: FieldSpec, g):
    """d1 g d1 with d1 = diag(-1, 1): how SL2 inside J reaches the Weil factor."""
    a, b, c, d = g
    return (a, int(F.neg(b)), int(F.neg(c)), d)


def ginzburg_Z(W, phi, f, j: int, right=None, full: bool = False) -> complex:
    """Literal summation of the zeta sum.

    right, if given, replaces W by its right translate g -> W(g right).
    full=True sums over all of SL2 and divides by q (a check that the
    summand is left N-invariant)."""
    q = W.q
    F = field_of_order(q)
    gs, pts = _geometry(q, full)
    if right is not None:
        pts = F.matmul(pts, np.asarray(right))
    vals = np.asarray(W.evaluate_many(pts)).reshape(len(gs), q, q)
    I = InducedRep(F, j)
    om = _weil_inv(q)
    phi = np.asarray(phi, dtype=complex)
    total = 0j
    for k, g in enumerate(gs):
        fg = I.section_value(f, g)
        if fg == 0:
            continue
        wphi = om.sl2(_d1(F, g)) @ phi
        total += fg * (wphi @ vals[k].sum(axis=1))
    return total / q if full else total


def Z(inp: ZetaInputGL1, **kw) -> complex:
    return ginzburg_Z(inp.W, inp.phi, inp.f, inp.j, **kw)


def delta0(q: int) -> np.ndarray:
    d = np.zeros(q, dtype=complex)
    d[0] = 1
    return d


def f0(q: int, j: int) -> np.ndarray:
    return InducedRep(field_of_order(q), j).f0


def intertwined_f0(q: int, j: int) -> np.ndarray:
    """M(f0) as a section of I(chi^-1)."""
    M = sl2_intertwiner(field_of_order(q), j)
    return M @ f0(q, j)


def gamma_fe(B: BesselLike, j: int) -> GammaGL1:
    q = B.q
    num = ginzburg_Z(B, delta0(q), intertwined_f0(q, j), -j)
    return GammaGL1(j % (q - 1), q, num, "functional-equation")


def gamma_closed(B: BesselLike, j: int) -> GammaGL1:
    """(q^{5/2} / sqrt(eps0)) sum_a B(h(a, 1) w1) eps(a) chi^-1(a), sqrt(eps0) = eps_psi."""
    q = B.q
    F = field_of_order(q)
    s = 0j
    for a in range(1, q):
        v = B.value_tw(W1_WORD, (a, 1))
        if v:
            s += v * float(F.legendre(a)) * np.conj(complex(F.chi(j, a)))
    return GammaGL1(j % (q - 1), q, q ** 2.5 / F.eps_psi * s, "closed-form")


def normalized_zeta(B: BesselLike, j: int = 0) -> complex:
    return ginzburg_Z(B, delta0(B.q), f0(B.q, j), j)


def invariance_check(B: BesselLike, j: int, n: int, seed: int, d1: bool = True,
                     phi=None, f=None) -> dict:
    """Max |Z(Pi(j(h)) W, omega(pr h) phi, r(m) f) - Z(W, phi, f)| over n random h in J.

    h = m v with m in SL2; the Weil factor sees pr_bar(h) (d1 selects the
    conjugated SL2 part), while f is translated by m itself, matching the
    way the zeta sum pairs omega(d1 g d1) with f(g)."""
    q = B.q
    G = group(q)
    F = G.F
    rng = np.random.default_rng(seed)
    I = InducedRep(F, j)
    if phi is None:
        phi = rng.normal(size=q) + 1j * rng.normal(size=q)
    if f is None:
        f = rng.normal(size=q + 1) + 1j * rng.normal(size=q + 1)
    base = ginzburg_Z(B, phi, f, j)
    om = _weil_inv(q)
    worst = 0.0
    for h in random_J(G, n, rng):
        g, hh = pr_bar(G, h, d1)
        m = G.j_split(h)[0]
        gm = (int(m[0, 0]), int(m[0, 1]), int(m[1, 0]), int(m[1, 1]))
        val = ginzburg_Z(B, om.op(g, hh) @ phi, I.matrix(gm) @ f, j, right=G.j_twist(h))
        worst = max(worst, abs(val - base))
    return {"q": q, "chi": j, "seed": seed, "samples": n, "d1": d1,
            "base": base, "max_error": worst}


def ratio_diagnostic(B: BesselLike, j: int, trials: int, seed: int) -> dict:
    """Spread of Z(B, phi, M f) / Z(B, phi, f) over random (phi, f).

    For a mock this need not be constant; the numbers are only reported."""
    q = B.q
    F = field_of_order(q)
    rng = np.random.default_rng(seed)
    M = sl2_intertwiner(F, j)
    ratios = []
    for _ in range(trials):
        phi = rng.normal(size=q) + 1j * rng.normal(size=q)
        f = rng.normal(size=q + 1) + 1j * rng.normal(size=q + 1)
        den = ginzburg_Z(B, phi, f, j)
        if abs(den) > 1e-9:
            ratios.append(ginzburg_Z(B, phi, M @ f, -j) / den)
    ref = gamma_fe(B, j).value
    spread = max((abs(r - ref) for r in ratios), default=0.0)
    return {"q": q, "chi": j, "trials": trials, "reference": ref, "max_deviation": spread}


def gamma_table(q: int, seed: int, chis=None) -> list[dict]:
    B = random_bessel_like(q, seed)
    chis = range(q - 1) if chis is None else chis
    out = []
    for j in chis:
        a, b = gamma_fe(B, j), gamma_closed(B, j)
        out.append({"chi": j, "fe": a.row()["value"], "closed": b.row()["value"],
                    "error": abs(a.value - b.value)})
    return out
