"""Bessel-like functions on G2(F_q).

A Bessel-like function B satisfies B(u1 g u2) = psi_U(u1 u2) B(g) for
u1, u2 in U, with psi_U(u) = psi(c_alpha + c_beta).  Writing g = u t w u'
in Bruhat normal form, B is determined by its values on the elements t w,
and only admissible t w can carry a nonzero value.  On a genuine generic
representation the support is contained in the four Weyl elements
1, w1, w2 and w_l; the mocks here are random functions with exactly that
shape, normalized by B(1) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .g2core import (ALPHA, BETA, G2, POSITIVE, SUPPORT_WORDS, WEYL_WORDS,
                     group, inversion_set, is_positive, weyl_act)

SIMPLE = (ALPHA, BETA)


def support_set() -> list[str]:
    """Weyl words that can support a Bessel function: 1, w1, w2, w_l."""
    return list(SUPPORT_WORDS)


def psi_U(G: G2, coords, a: int = 1):
    """psi_U on U, from coordinates on POSITIVE (batched on the last axis)."""
    F = G.F
    c = np.asarray(coords, dtype=np.int64)
    return F.psi(F.add(c[..., 0], c[..., 1]), a)


class GenericCharacter:
    """psi_U(u) = psi_a(u_alpha + u_beta) as a function of matrices."""

    def __init__(self, G: G2, a: int = 1):
        self.G = G
        self.a = a

    def __call__(self, u) -> complex:
        c = self.G.peel(u)
        if c is None:
            raise ValueError("not an element of U")
        return complex(psi_U(self.G, c, self.a))


def blocking_roots(word: str) -> list[tuple]:
    """Simple gamma with w(gamma) positive but not simple.

    For such gamma, x_gamma(r) is conjugated by w into U while psi_U
    sees r on one side only, so B vanishes on the whole cell."""
    out = []
    for g in SIMPLE:
        img = weyl_act(word, g)
        if is_positive(img) and img not in SIMPLE:
            out.append(g)
    return out


@lru_cache(maxsize=None)
def _conjugation_table(q: int, word: str) -> dict:
    """For each gamma > 0 with w gamma > 0: (w gamma, c) such that
    w_rep x_gamma(r) w_rep^-1 = x_{w gamma}(c r)."""
    G = group(q)
    wr = G.weyl_reps[word]
    wi = G.inv(wr)
    out = {}
    for g in POSITIVE:
        img = weyl_act(word, g)
        if not is_positive(img):
            continue
        c = G.peel(G.mul(wr, G.x(g, 1), wi), [img])
        if c is None:
            raise AssertionError(f"w_{word} does not map U_{g} to U_{img}")
        out[g] = (img, c[0])
    return out


def _char_value(G: G2, t, gamma) -> int:
    """gamma(h(t1, t2)) as a field code: x_gamma(r) -> x_gamma(gamma(t) r)."""
    h = G.h(*t)
    c = G.peel(G.mul(h, G.x(gamma, 1), G.inv(h)), [gamma])
    return c[0]


def admissible_tw(G: G2, t, word: str, a: int = 1) -> bool:
    """Whether t w_rep can carry a nonzero Bessel value.

    U meets (t w)^-1 U (t w) in the root groups U_gamma with w gamma > 0.
    On each of them u -> psi_U(t w u (t w)^-1) / psi_U(u) is a character,
    and B(t w) != 0 forces it to be trivial.  The scaling a only matters
    through r -> a r, which cannot change triviality; it is kept so that
    this can be checked."""
    F = G.F
    for g, (img, c) in _conjugation_table(G.q, word).items():
        coef = F.mul(_char_value(G, t, img), c)
        left = img in SIMPLE
        right = g in SIMPLE
        if left and right:
            if int(coef) != 1:
                return False
        elif left or right:
            return False
    return True


def admissible(G: G2, g, a: int = 1) -> bool:
    """Admissibility of an arbitrary element, through its Bruhat cell."""
    d = G.bruhat(g)
    return admissible_tw(G, d.t, d.word, a)


@lru_cache(maxsize=None)
def admissible_tori(q: int, word: str, a: int = 1) -> tuple:
    G = group(q)
    return tuple((t1, t2) for t1 in range(1, q) for t2 in range(1, q)
                 if admissible_tw(G, (t1, t2), word, a))


def scan_admissible(G: G2, g, a: int = 1) -> bool:
    """Slow reference: run over all u2 = prod x_gamma(r) in U cap g^-1 U g
    with one coordinate at a time and test the character identity."""
    F = G.F
    gi = G.inv(g)
    for gamma in POSITIVE:
        for r in range(1, G.q):
            u2 = G.x(gamma, r)
            conj = G.mul(g, u2, gi)
            c = G.peel(conj)
            if c is None:
                continue
            lhs = complex(psi_U(G, c, a))
            rhs = complex(F.psi(r if gamma in SIMPLE else 0, a))
            if abs(lhs - rhs) > 1e-9:
                return False
    return True


@dataclass
class BesselLike:
    """A function on G2 with B(u1 g u2) = psi_U(u1 u2) B(g).

    values maps (word, t1, t2) to B(h(t1, t2) w_rep); anything missing is 0.
    The table is only consulted on admissible keys."""
    q: int
    values: dict
    seed: int | None = None
    mask: tuple = tuple(SUPPORT_WORDS)
    a: int = 1
    _dense: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for (w, t1, t2) in self.values:
            if (t1, t2) not in admissible_tori(self.q, w, self.a):
                raise ValueError(f"inadmissible key {(w, t1, t2)}")

    @property
    def G(self) -> G2:
        return group(self.q)

    @property
    def dense(self) -> np.ndarray:
        if self._dense is None:
            d = np.zeros((len(WEYL_WORDS), self.q, self.q), dtype=complex)
            for (w, t1, t2), v in self.values.items():
                d[WEYL_WORDS.index(w), t1, t2] = v
            self._dense = d
        return self._dense

    def value_tw(self, word: str, t) -> complex:
        return complex(self.values.get((word, int(t[0]), int(t[1])), 0))

    def evaluate(self, g) -> complex:
        d = self.G.bruhat(g)
        v = self.value_tw(d.word, d.t)
        if v == 0:
            return 0j
        F = self.G.F
        s = F.add(d.u[0], d.u[1])
        for c, r in zip(d.up, inversion_set(d.word)):
            if r in SIMPLE:
                s = F.add(s, c)
        return complex(F.psi(s, self.a)) * v

    def evaluate_many(self, gs) -> np.ndarray:
        G = self.G
        F = G.F
        u, t, widx, up = G.bruhat_many(gs)
        vals = self.dense[widx, t[:, 0], t[:, 1]]
        s = F.add(u[:, 0], u[:, 1])
        sel = _simple_slots(self.q)[widx]
        s = F.add(s, F.sum(np.where(sel, up, 0), axis=1))
        return vals * F.psi(s, self.a)

    __call__ = evaluate

    def __sub__(self, other: "BesselLike") -> "BesselLike":
        if self.q != other.q or self.a != other.a:
            raise ValueError("incompatible Bessel-like functions")
        keys = set(self.values) | set(other.values)
        vals = {k: self.values.get(k, 0) - other.values.get(k, 0) for k in keys}
        return BesselLike(self.q, {k: v for k, v in vals.items() if v != 0},
                          None, self.mask, self.a)

    def restrict(self, words) -> "BesselLike":
        vals = {k: v for k, v in self.values.items() if k[0] in words}
        return BesselLike(self.q, vals, self.seed, tuple(words), self.a)

    def support(self) -> list[tuple]:
        return sorted(k for k, v in self.values.items() if v != 0)

    def provenance(self) -> dict:
        return {"q": self.q, "seed": self.seed, "mask": list(self.mask), "psi_scale": self.a}


@lru_cache(maxsize=None)
def _simple_slots(q: int) -> np.ndarray:
    """(12, 6) mask: slot k of up is on a simple root for that word."""
    out = np.zeros((len(WEYL_WORDS), 6), dtype=bool)
    for i, w in enumerate(WEYL_WORDS):
        for k, r in enumerate(inversion_set(w)):
            out[i, k] = r in SIMPLE
    return out


def random_bessel_like(q: int, seed: int, support_mask=tuple(SUPPORT_WORDS),
                       a: int = 1, normalized: bool = True) -> BesselLike:
    """Random unit-disc values on the admissible t w with w in the mask.

    B(1) is 1 when normalized; otherwise the identity cell gets a random
    value too (useful for differences of two Bessel functions)."""
    mask = tuple(w for w in SUPPORT_WORDS if w in set(support_mask))
    if normalized and "" not in mask:
        raise ValueError("support mask must contain the identity")
    rng = np.random.default_rng(seed)
    vals = {}
    for w in SUPPORT_WORDS:  # fixed order keeps draws deterministic
        for t in admissible_tori(q, w, a):
            rad = np.sqrt(rng.random())
            ang = 2 * np.pi * rng.random()
            if w not in mask:
                continue
            vals[(w, *t)] = 1.0 + 0j if (w == "" and normalized) else complex(rad * np.exp(1j * ang))
    return BesselLike(q, vals, seed, mask, a)


def cell_admissible_counts(q: int, a: int = 1) -> dict[str, int]:
    return {w: len(admissible_tori(q, w, a)) for w in WEYL_WORDS}
