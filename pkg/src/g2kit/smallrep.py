"""Representations of the small groups around G2.

* the Heisenberg group H on F_q^3 and the semidirect product SL2 x| H,
* the Weil representation omega_psi on functions on F_q (dimension q),
  together with its pullback to the Fourier-Jacobi group J,
* the induced representation I(chi) of SL2 and its intertwining operator,
* every irreducible generic representation of GL2(F_q) with its Bessel
  function and Whittaker space.

Operators are complex q x q (or (q+1) x (q+1)) matrices acting on column
vectors of function values indexed by field codes.  A matrix A encodes
(A phi)(xi) = sum_eta A[xi, eta] phi(eta).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .ff import FieldSpec, QuadExt, field_of_order
from .g2core import G2, group

# SL2 elements are tuples (a, b, c, d) for [[a, b], [c, d]].


def sl2_mul(F: FieldSpec, g, h):
    a, b, c, d = g
    e, f, gg, hh = h
    return (int(F.add(F.mul(a, e), F.mul(b, gg))), int(F.add(F.mul(a, f), F.mul(b, hh))),
            int(F.add(F.mul(c, e), F.mul(d, gg))), int(F.add(F.mul(c, f), F.mul(d, hh))))


def sl2_inv(F: FieldSpec, g):
    a, b, c, d = g
    return (d, int(F.neg(b)), int(F.neg(c)), a)


def sl2_elements(F: FieldSpec) -> list[tuple]:
    out = []
    for a, b, c, d in itertools.product(range(F.q), repeat=4):
        if int(F.sub(F.mul(a, d), F.mul(b, c))) == 1:
            out.append((a, b, c, d))
    return out


def n_elt(b):
    return (1, b, 0, 1)


def heis_add(F: FieldSpec, h1, h2):
    """[x1,y1,z1] + [x2,y2,z2] = [x1+x2, y1+y2, z1+z2 - x1 y2 + x2 y1]."""
    x1, y1, z1 = h1
    x2, y2, z2 = h2
    z = F.add(F.add(z1, z2), F.sub(F.mul(x2, y1), F.mul(x1, y2)))
    return (int(F.add(x1, x2)), int(F.add(y1, y2)), int(z))


def heis_act(F: FieldSpec, h, g):
    """Right action of SL2 on H: (x, y) -> (x, y) g, z fixed."""
    x, y, z = h
    a, b, c, d = g
    return (int(F.add(F.mul(x, a), F.mul(y, c))), int(F.add(F.mul(x, b), F.mul(y, d))), int(z))


def sj_mul(F: FieldSpec, e1, e2):
    """Product in SL2 x| H with (g1, h1)(g2, h2) = (g1 g2, h1.g2 + h2).

    This is the law of J written as m * v with m in SL2 and v in V."""
    (g1, h1), (g2, h2) = e1, e2
    return (sl2_mul(F, g1, g2), heis_add(F, heis_act(F, h1, g2), h2))


class Weil:
    """The Weil representation omega_{psi_a} of SL2(F_q) x| H."""

    def __init__(self, F: FieldSpec, a: int = 1, gamma_sign: int = 1):
        if int(a) == 0:
            raise ValueError("psi_a needs a != 0")
        self.F = F
        self.a = int(a)
        self.q = F.q
        self.xi = np.arange(F.q)
        # gamma(b) = sum_x psi(gamma_sign * b x^2).  With gamma_sign = -1 the
        # last formula is not multiplicative when q = 3 mod 4.
        self.gamma_sign = gamma_sign

    def psi(self, x):
        return self.F.psi(np.asarray(x), self.a)

    @cached_property
    def _gamma(self) -> dict[int, complex]:
        F, xs = self.F, self.xi
        sq = F.mul(xs, xs)
        sgn = F.elt(self.gamma_sign)
        return {b: complex(self.psi(F.mul(F.mul(sgn, b), sq)).sum()) for b in range(1, self.q)}

    def gamma(self, b: int) -> complex:
        return self._gamma[int(b)]

    def _perm(self, images, coeff) -> np.ndarray:
        A = np.zeros((self.q, self.q), dtype=complex)
        A[self.xi, images] = coeff
        return A

    # the five defining cases
    def heis_x(self, x, z) -> np.ndarray:
        """[x,0,z]: phi(xi) -> psi(z) phi(xi + x)."""
        return self._perm(self.F.add(self.xi, x), self.psi(z))

    def heis_y(self, y) -> np.ndarray:
        """[0,y,0]: phi(xi) -> psi(-2 xi y) phi(xi)."""
        F = self.F
        return np.diag(self.psi(F.neg(F.mul(F.mul(2 % F.p, self.xi), y)))).astype(complex)

    def torus(self, a) -> np.ndarray:
        """diag(a, 1/a): phi(xi) -> eps(a) phi(a xi)."""
        F = self.F
        return self._perm(F.mul(self.xi, a), float(F.legendre(a)))

    def unip(self, b) -> np.ndarray:
        """n(b): phi(xi) -> psi(-b xi^2) phi(xi)."""
        F = self.F
        return np.diag(self.psi(F.neg(F.mul(b, F.mul(self.xi, self.xi))))).astype(complex)

    def weyl(self, b) -> np.ndarray:
        """[[0, b], [-1/b, 0]]: phi -> gamma(b)^-1 sum_x phi(x) psi(-2 x b xi)."""
        F = self.F
        prod = F.mul(F.mul(2 % F.p, b), F.mul(self.xi[:, None], self.xi[None, :]))
        return self.psi(F.neg(prod)) / self.gamma(b)

    def heis(self, h) -> np.ndarray:
        F = self.F
        x, y, z = h
        return self.heis_x(x, F.add(z, F.mul(x, y))) @ self.heis_y(y)

    def sl2(self, g) -> np.ndarray:
        F = self.F
        a, b, c, d = g
        if c == 0:
            return self.torus(a) @ self.unip(F.div(b, a))
        ci = F.inv(c)
        return (self.unip(F.mul(a, ci)) @ self.weyl(F.neg(ci))
                @ self.unip(F.mul(d, ci)))

    def op(self, g=(1, 0, 0, 1), h=(0, 0, 0)) -> np.ndarray:
        """omega(g, h) = omega(g) omega(h)."""
        return self.sl2(g) @ self.heis(h)

    def character(self, g=(1, 0, 0, 1), h=(0, 0, 0)) -> complex:
        return complex(np.trace(self.op(g, h)))

    # enumeration of the whole group ------------------------------------
    @cached_property
    def elements(self) -> list[tuple]:
        hs = list(itertools.product(range(self.q), repeat=3))
        return [(g, h) for g in sl2_elements(self.F) for h in hs]

    @cached_property
    def _sl2_index(self) -> dict[tuple, int]:
        return {g: i for i, g in enumerate(sl2_elements(self.F))}

    def index(self, e) -> int:
        g, (x, y, z) = e
        q = self.q
        return self._sl2_index[g] * q ** 3 + x * q * q + y * q + z

    @cached_property
    def table(self) -> np.ndarray:
        """omega on every element, in the order of self.elements."""
        gs = sl2_elements(self.F)
        H = [self.heis(h) for h in itertools.product(range(self.q), repeat=3)]
        out = np.empty((len(gs) * len(H), self.q, self.q), dtype=complex)
        for i, g in enumerate(gs):
            S = self.sl2(g)
            out[i * len(H):(i + 1) * len(H)] = S @ np.array(H)
        return out


def _pair_products(F: FieldSpec, W: Weil, I1, I2) -> np.ndarray:
    """Indices of e1 * e2 for aligned index arrays, vectorized."""
    q = W.q
    gs = np.array(sl2_elements(F), dtype=np.int64)
    n3 = q ** 3

    def unpack(I):
        g = gs[I // n3]
        r = I % n3
        return g, r // (q * q), (r // q) % q, r % q

    (g1, x1, y1, z1), (g2, x2, y2, z2) = unpack(I1), unpack(I2)
    a, b, c, d = g1.T
    e, f, gg, hh = g2.T
    m = F.mul
    prod = np.stack([F.add(m(a, e), m(b, gg)), F.add(m(a, f), m(b, hh)),
                     F.add(m(c, e), m(d, gg)), F.add(m(c, f), m(d, hh))], axis=1)
    # h1 . g2
    u = F.add(m(x1, e), m(y1, gg))
    v = F.add(m(x1, f), m(y1, hh))
    x = F.add(u, x2)
    y = F.add(v, y2)
    z = F.add(F.add(z1, z2), F.sub(m(x2, v), m(u, y2)))
    code = ((prod[:, 0] * q + prod[:, 1]) * q + prod[:, 2]) * q + prod[:, 3]
    lookup = np.full(q ** 4, -1, dtype=np.int64)
    gcode = ((gs[:, 0] * q + gs[:, 1]) * q + gs[:, 2]) * q + gs[:, 3]
    lookup[gcode] = np.arange(len(gs))
    return lookup[code] * n3 + (x * q + y) * q + z


def weil_homomorphism_check(q: int, samples: int | None = None, seed: int = 0,
                            a: int = 1, gamma_sign: int = 1) -> dict:
    """max |omega(e1 e2) - omega(e1) omega(e2)| over all pairs or a sample."""
    F = field_of_order(q)
    W = Weil(F, a, gamma_sign)
    T = W.table
    n = len(T)
    worst = 0.0
    if samples is None:
        J = np.arange(n)
        for i in range(n):
            k = _pair_products(F, W, np.full(n, i), J)
            err = np.abs(T[k] - T[i][None] @ T).max()
            worst = max(worst, float(err))
        count = n * n
    else:
        rng = np.random.default_rng(seed)
        I1 = rng.integers(0, n, samples)
        I2 = rng.integers(0, n, samples)
        k = _pair_products(F, W, I1, I2)
        for s in range(0, samples, 20000):
            sl = slice(s, s + 20000)
            err = np.abs(T[k[sl]] - T[I1[sl]] @ T[I2[sl]]).max()
            worst = max(worst, float(err))
        count = samples
    return {"q": q, "group_order": n, "pairs": count, "max_error": worst}


# -- pullback to J ---------------------------------------------------------

def pr_bar(G: G2, j, d1: bool = True):
    """(g, h) in SL2 x| H for j = m (r1,...,r5) in J.

    pr_bar(m, r) = (d1 m d1, (r1, r2, r3 - r1 r2)) with d1 = diag(-1, 1);
    d1=False drops the conjugation."""
    F = G.F
    split = G.j_split(j)
    if split is None:
        raise ValueError("element is not in J")
    m, r = split
    a, b, c, d = (int(m[0, 0]), int(m[0, 1]), int(m[1, 0]), int(m[1, 1]))
    g = (a, int(F.neg(b)), int(F.neg(c)), d) if d1 else (a, b, c, d)
    r1, r2, r3 = r[0], r[1], r[2]
    return g, (int(r1), int(r2), int(F.sub(r3, F.mul(r1, r2))))


def m_embed_many(G: G2, m) -> np.ndarray:
    """Batched GL2 -> M."""
    F = G.F
    m = np.asarray(m, dtype=np.int64)
    a, b, c, d = m[:, 0, 0], m[:, 0, 1], m[:, 1, 0], m[:, 1, 1]
    det = F.sub(F.mul(a, d), F.mul(b, c))
    di = F.inv(det)
    g = np.zeros((len(m), 7, 7), dtype=np.int64)
    g[:, 0:2, 0:2] = m
    g[:, 2, 2] = di
    g[:, 3, 3] = 1
    g[:, 4, 4] = det
    g[:, 5, 5] = F.mul(di, a)
    g[:, 5, 6] = F.mul(di, F.neg(b))
    g[:, 6, 5] = F.mul(di, F.neg(c))
    g[:, 6, 6] = F.mul(di, d)
    return g


def pr_bar_many(G: G2, js, d1: bool = True):
    """Batched pr_bar: arrays (g of shape (n, 4), h of shape (n, 3))."""
    F = G.F
    js = np.asarray(js, dtype=np.int64)
    m = js[:, 0:2, 0:2]
    rest = F.matmul(G.inv(m_embed_many(G, m)), js)
    r, ok = G.peel_many(rest, [(1, 0), (1, 1), (2, 1), (3, 1), (3, 2)])
    if not ok.all():
        raise ValueError("element is not in J")
    a, b, c, d = m[:, 0, 0], m[:, 0, 1], m[:, 1, 0], m[:, 1, 1]
    if d1:
        b, c = F.neg(b), F.neg(c)
    g = np.stack([a, b, c, d], axis=1)
    h = np.stack([r[:, 0], r[:, 1], F.sub(r[:, 2], F.mul(r[:, 0], r[:, 1]))], axis=1)
    return g, h


def weil_on_J(G: G2, j, d1: bool = True, a: int = 1) -> np.ndarray:
    g, h = pr_bar(G, j, d1)
    return _weil(G.q, a).op(g, h)


@lru_cache(maxsize=None)
def _weil(q: int, a: int) -> Weil:
    return Weil(field_of_order(q), a)


def random_J(G: G2, n: int, rng) -> np.ndarray:
    """n uniformly random elements m * v of J."""
    F = G.F
    gs = np.array(sl2_elements(F), dtype=np.int64)
    g = gs[rng.integers(0, len(gs), n)].reshape(n, 2, 2)
    v = rng.integers(0, F.q, (5, n))
    return F.matmul(m_embed_many(G, g), G.v_elt(*v))


def weil_J_homomorphism_check(q: int, samples: int = 100000, seed: int = 0,
                              d1: bool = True) -> dict:
    G = group(q)
    F = G.F
    W = _weil(q, 1)
    T = W.table
    rng = np.random.default_rng(seed)
    worst = 0.0
    chunk = 20000
    for s in range(0, samples, chunk):
        n = min(chunk, samples - s)
        j1, j2 = random_J(G, n, rng), random_J(G, n, rng)
        idx = []
        for js in (j1, j2, F.matmul(j1, j2)):
            g, h = pr_bar_many(G, js, d1)
            idx.append(_index_many(W, g, h))
        err = np.abs(T[idx[2]] - T[idx[0]] @ T[idx[1]]).max()
        worst = max(worst, float(err))
    return {"q": q, "pairs": samples, "d1": d1, "max_error": worst}


def _index_many(W: Weil, g, h) -> np.ndarray:
    q = W.q
    gs = np.array(sl2_elements(W.F), dtype=np.int64)
    lookup = np.full(q ** 4, -1, dtype=np.int64)
    lookup[((gs[:, 0] * q + gs[:, 1]) * q + gs[:, 2]) * q + gs[:, 3]] = np.arange(len(gs))
    gi = lookup[((g[:, 0] * q + g[:, 1]) * q + g[:, 2]) * q + g[:, 3]]
    return gi * q ** 3 + (h[:, 0] * q + h[:, 1]) * q + h[:, 2]


# -- I(chi) ----------------------------------------------------------------

def w_one(F: FieldSpec):
    """w^1 = [[0, 1], [-1, 0]]."""
    return (0, 1, int(F.neg(1)), 0)


class InducedRep:
    """I(chi) = {f : f(b y) = chi(a) f(y)} for b = [[a, *], [0, 1/a]].

    Basis: values at the coset representatives 1 and w^1 n(r), r in F_q
    (index 0 and 1 + r).  SL2 acts by right translation."""

    def __init__(self, F: FieldSpec, j: int):
        self.F = F
        self.q = F.q
        self.j = j % (F.q - 1)
        self.dim = F.q + 1
        w = w_one(F)
        self.reps = [(1, 0, 0, 1)] + [sl2_mul(F, w, n_elt(r)) for r in range(F.q)]

    def chi(self, x) -> complex:
        return complex(self.F.chi(self.j, int(x)))

    def locate(self, y):
        """(k, a) with y = b * reps[k] and a the top-left entry of b."""
        F = self.F
        a, b, c, d = y
        if c == 0:
            return 0, a
        return 1 + int(F.div(d, c)), int(F.neg(F.inv(c)))

    def matrix(self, g) -> np.ndarray:
        F = self.F
        R = np.zeros((self.dim, self.dim), dtype=complex)
        for i, x in enumerate(self.reps):
            k, a = self.locate(sl2_mul(F, x, g))
            R[i, k] = self.chi(a)
        return R

    def character(self, g) -> complex:
        return complex(np.trace(self.matrix(g)))

    def section_value(self, f, y) -> complex:
        """f(y) for f given by its values at the representatives."""
        k, a = self.locate(y)
        return self.chi(a) * f[k]

    @property
    def f0(self) -> np.ndarray:
        """The section supported on the Borel with f0(1) = 1."""
        f = np.zeros(self.dim, dtype=complex)
        f[0] = 1
        return f


def induced_rep(F: FieldSpec, j: int) -> InducedRep:
    return InducedRep(F, j)


def sl2_intertwiner(F: FieldSpec, j: int) -> np.ndarray:
    """Matrix of M: I(chi_j) -> I(chi_j^-1), M f(g) = sum_x f((w^1)^-1 n(x) g)."""
    I = InducedRep(F, j)
    winv = sl2_inv(F, w_one(F))
    M = np.zeros((I.dim, I.dim), dtype=complex)
    for i, y in enumerate(I.reps):
        for x in range(F.q):
            k, a = I.locate(sl2_mul(F, sl2_mul(F, winv, n_elt(x)), y))
            M[i, k] += I.chi(a)
    return M


# -- GL2(F_q) --------------------------------------------------------------

class GL2:
    """GL2(F_q) as an indexed finite group with a multiplication table."""

    def __init__(self, F: FieldSpec):
        self.F = F
        q = self.q = F.q
        els = []
        for a, b, c, d in itertools.product(range(q), repeat=4):
            if int(F.sub(F.mul(a, d), F.mul(b, c))):
                els.append((a, b, c, d))
        self.elements = els
        self.n = len(els)
        self.arr = np.array(els, dtype=np.int64).reshape(-1, 2, 2)
        self._lookup = np.full(q ** 4, -1, dtype=np.int64)
        self._lookup[self._codes(self.arr)] = np.arange(self.n)
        self.mul_table = self._lookup[self._codes(
            F.matmul(self.arr[:, None], self.arr[None]))]
        self.inv_idx = np.argmax(self.mul_table == self.identity, axis=1)
        self.N = [self.index((1, x, 0, 1)) for x in range(q)]

    def _codes(self, m) -> np.ndarray:
        q = self.q
        return ((m[..., 0, 0] * q + m[..., 0, 1]) * q + m[..., 1, 0]) * q + m[..., 1, 1]

    @property
    def identity(self) -> int:
        return self.index((1, 0, 0, 1))

    def index(self, m) -> int:
        m = np.asarray(m, dtype=np.int64).reshape(2, 2)
        return int(self._lookup[self._codes(m)])

    def index_many(self, m) -> np.ndarray:
        return self._lookup[self._codes(np.asarray(m, dtype=np.int64))]

    def det(self, i: int) -> int:
        a, b, c, d = self.elements[i]
        F = self.F
        return int(F.sub(F.mul(a, d), F.mul(b, c)))

    @cached_property
    def ext(self) -> QuadExt:
        return QuadExt(self.F)

    def classify(self, i: int):
        """('central', z) | ('unipotent', z) | ('split', x, y) | ('elliptic', zeta)."""
        F = self.F
        a, b, c, d = self.elements[i]
        t = int(F.add(a, d))
        det = self.det(i)
        disc = int(F.sub(F.mul(t, t), F.mul(4 % F.p, det)))
        half = int(F.inv(2 % F.p))
        if disc == 0:
            z = int(F.mul(t, half))
            if b == 0 and c == 0:
                return ("central", z)
            return ("unipotent", z)
        s = F.sqrt(disc)
        if s is not None:
            x = int(F.mul(F.add(t, s), half))
            y = int(F.mul(F.sub(t, s), half))
            return ("split", x, y)
        s = F.sqrt(F.div(disc, F.kappa))
        zeta = self.ext.code(F.mul(t, half), F.mul(s, half))
        return ("elliptic", zeta)


@dataclass
class GL2Irrep:
    """An irreducible generic representation with its character and Bessel function."""
    kind: str                 # "ps", "st" or "cusp"
    params: tuple
    dim: int
    char: np.ndarray = field(repr=False)
    bessel: np.ndarray = field(repr=False)

    @property
    def label(self) -> str:
        return f"{self.kind}:{','.join(str(p) for p in self.params)}"


def _theta(K: QuadExt, j: int, zeta: int) -> complex:
    return complex(np.exp(2j * np.pi * j * K.log_table[zeta] / (K.order - 1)))


def gl2_characters(Gl: GL2) -> list[tuple[str, tuple, int, np.ndarray]]:
    """Characters of all irreducible representations of GL2(F_q).

    Returned in the order: chi o det, principal series, twisted Steinberg,
    cuspidal."""
    F, q = Gl.F, Gl.q
    K = Gl.ext
    n = q - 1
    cls = [Gl.classify(i) for i in range(Gl.n)]

    def mc(j, x):
        return complex(F.chi(j, int(x)))

    out = []
    for j in range(n):
        out.append(("det", (j,), 1,
                    np.array([mc(j, Gl.det(i)) for i in range(Gl.n)])))
    for j1 in range(n):
        for j2 in range(j1 + 1, n):
            vals = []
            for c in cls:
                if c[0] == "central":
                    vals.append((q + 1) * mc(j1, c[1]) * mc(j2, c[1]))
                elif c[0] == "unipotent":
                    vals.append(mc(j1, c[1]) * mc(j2, c[1]))
                elif c[0] == "split":
                    x, y = c[1], c[2]
                    vals.append(mc(j1, x) * mc(j2, y) + mc(j1, y) * mc(j2, x))
                else:
                    vals.append(0)
            out.append(("ps", (j1, j2), q + 1, np.array(vals)))
    for j in range(n):
        vals = []
        for i, c in enumerate(cls):
            dj = mc(j, Gl.det(i))
            if c[0] == "central":
                vals.append(q * dj)
            elif c[0] == "unipotent":
                vals.append(0)
            elif c[0] == "split":
                vals.append(dj)
            else:
                vals.append(-dj)
        out.append(("st", (j,), q, np.array(vals)))
    seen = set()
    m = q * q - 1
    for k in range(m):
        if k % (q + 1) == 0 or k in seen:
            continue
        seen.update({k, (k * q) % m})
        vals = []
        for c in cls:
            if c[0] == "central":
                vals.append((q - 1) * _theta(K, k, K.embed(c[1])))
            elif c[0] == "unipotent":
                vals.append(-_theta(K, k, K.embed(c[1])))
            elif c[0] == "split":
                vals.append(0)
            else:
                z = c[1]
                vals.append(-(_theta(K, k, z) + _theta(K, k, K.conj(z))))
        out.append(("cusp", (k,), q - 1, np.array(vals)))
    return out


def _bessel(Gl: GL2, char: np.ndarray) -> np.ndarray:
    """J(g) = (1/q) sum_x psi(x) char(g n(x)): the psi^-1 Bessel function."""
    F = Gl.F
    psi = F.psi(np.arange(Gl.q))
    cols = Gl.mul_table[:, Gl.N]           # g n(x)
    return (char[cols] * psi[None, :]).sum(axis=1) / Gl.q


@lru_cache(maxsize=None)
def gl2_group(q: int) -> GL2:
    return GL2(field_of_order(q))


@lru_cache(maxsize=None)
def gl2_generic_irreps(q: int) -> tuple[GL2Irrep, ...]:
    Gl = gl2_group(q)
    out = []
    for kind, params, dim, ch in gl2_characters(Gl):
        if kind == "det":
            continue
        out.append(GL2Irrep(kind, params, dim, ch, _bessel(Gl, ch)))
    return tuple(out)


def find_irrep(q: int, label: str) -> GL2Irrep:
    for r in gl2_generic_irreps(q):
        if r.label == label:
            return r
    raise KeyError(label)


def whittaker_basis(q: int, rep: GL2Irrep) -> tuple[list[int], np.ndarray]:
    """Elements h_k with W_k(g) = J(g h_k) a basis of the Whittaker space.

    Returns (h indices, array of shape (dim, |GL2|))."""
    Gl = gl2_group(q)
    chosen, rows = [], []
    basis = np.zeros((0, Gl.n), dtype=complex)
    for h in range(Gl.n):
        w = rep.bessel[Gl.mul_table[:, h]]
        cand = np.vstack([basis, w])
        if np.linalg.matrix_rank(cand, tol=1e-8) > len(basis):
            basis = cand
            chosen.append(h)
            rows.append(w)
            if len(chosen) == rep.dim:
                break
    return chosen, np.array(rows)


def space_dimension(q: int, rep: GL2Irrep) -> int:
    """Rank of the span of all right translates of the Bessel function."""
    Gl = gl2_group(q)
    mat = rep.bessel[Gl.mul_table]          # [g, h] -> J(g h)
    return int(np.linalg.matrix_rank(mat, tol=1e-8))
