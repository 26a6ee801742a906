"""G2(F_q) realized inside SO_7(F_q).

Matrices are numpy int64 arrays of field codes, shape (..., 7, 7).  Roots
are pairs (m, n) meaning m*alpha + n*beta, with alpha short and beta long.
String labels such as ``"a"``, ``"3a+2b"`` or ``"-(a+b)"`` are accepted
wherever a root is expected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce

import numpy as np

from .ff import FieldSpec, field_of_order

# ---------------------------------------------------------------- roots

POSITIVE = [(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)]
ROOTS = POSITIVE + [(-m, -n) for m, n in POSITIVE]
SHORT = {(1, 0), (1, 1), (2, 1)}
ALPHA, BETA = (1, 0), (0, 1)
V_ROOTS = [(1, 0), (1, 1), (2, 1), (3, 1), (3, 2)]
Z_ROOTS = [(2, 1), (3, 1), (3, 2)]
UH_ROOTS = [(0, 1), (2, 1), (3, 1), (3, 2)]

_NAMES = {(1, 0): "a", (0, 1): "b", (1, 1): "a+b", (2, 1): "2a+b",
          (3, 1): "3a+b", (3, 2): "3a+2b"}


def root_name(gamma) -> str:
    gamma = as_root(gamma)
    if gamma in _NAMES:
        return _NAMES[gamma]
    s = _NAMES[(-gamma[0], -gamma[1])]
    return "-" + s if len(s) == 1 else f"-({s})"


def as_root(label) -> tuple[int, int]:
    if isinstance(label, tuple):
        if label not in ROOTS:
            raise ValueError(f"{label} is not a root of G2")
        return label
    s = label.replace(" ", "").replace("alpha", "a").replace("beta", "b")
    sign = 1
    if s.startswith("-"):
        sign, s = -1, s[1:].strip("()")
    for k, v in _NAMES.items():
        if v == s:
            return (sign * k[0], sign * k[1])
    raise ValueError(f"unknown root label {label!r}")


def height(gamma) -> int:
    return sum(as_root(gamma))


def pairing(gamma, coroot) -> int:
    """<gamma, coroot^vee> for coroot one of the simple roots."""
    m, n = as_root(gamma)
    if as_root(coroot) == ALPHA:
        return 2 * m - 3 * n
    return -m + 2 * n


def reflect(s: str, gamma) -> tuple[int, int]:
    m, n = as_root(gamma)
    if s == "a":
        return (m - (2 * m - 3 * n), n)
    return (m, n - (-m + 2 * n))


def weyl_act(word: str, gamma) -> tuple[int, int]:
    """Image of gamma under the product of simple reflections in word."""
    gamma = as_root(gamma)
    for s in reversed(word):
        gamma = reflect(s, gamma)
    return gamma


def is_positive(gamma) -> bool:
    return as_root(gamma) in POSITIVE


WEYL_WORDS = ["", "a", "b", "ab", "ba", "aba", "bab", "abab", "baba",
              "ababa", "babab", "ababab"]
W_LONG = "ababab"
W1_WORD = "babab"   # w_l s_alpha
W2_WORD = "ababa"   # w_l s_beta
SUPPORT_WORDS = ["", W1_WORD, W2_WORD, W_LONG]


def inversion_set(word: str) -> list[tuple[int, int]]:
    """Positive roots gamma with w(gamma) < 0, in the standard U order."""
    return [g for g in POSITIVE if not is_positive(weyl_act(word, g))]


def reduce_word(word: str) -> str:
    """The listed reduced word with the same action on roots."""
    act = tuple(weyl_act(word, g) for g in POSITIVE)
    for w in WEYL_WORDS:
        if tuple(weyl_act(w, g) for g in POSITIVE) == act:
            return w
    raise AssertionError(word)


# Weights of the standard basis vectors e_0..e_6 in (alpha, beta) coordinates.
WEIGHTS = [(1, 1), (1, 0), (-2, -1), (0, 0), (2, 1), (-1, 0), (-1, -1)]
# Ordering of the basis by decreasing height; B is upper triangular in it.
PERM = [4, 0, 1, 3, 5, 6, 2]

# Root subgroup matrices: x_gamma(r) = I + sum coeff * r^power at (i, j).
_TERMS = {
    (1, 0): [(1, 3, -2, 1), (1, 5, -1, 2), (3, 5, 1, 1), (4, 0, -1, 1), (6, 2, -1, 1)],
    (-1, 0): [(0, 4, -1, 1), (2, 6, -1, 1), (3, 1, -1, 1), (5, 1, -1, 2), (5, 3, 2, 1)],
    (1, 1): [(0, 3, -2, 1), (0, 6, -1, 2), (3, 6, 1, 1), (4, 1, 1, 1), (5, 2, 1, 1)],
    (-1, -1): [(1, 4, 1, 1), (2, 5, 1, 1), (3, 0, -1, 1), (6, 0, -1, 2), (6, 3, 2, 1)],
    (2, 1): [(0, 5, -1, 1), (1, 6, 1, 1), (3, 2, -1, 1), (4, 2, 1, 2), (4, 3, -2, 1)],
    (-2, -1): [(2, 3, -2, 1), (2, 4, 1, 2), (3, 4, -1, 1), (5, 0, -1, 1), (6, 1, 1, 1)],
    (0, 1): [(0, 1, 1, 1), (5, 6, -1, 1)],
    (3, 1): [(1, 2, 1, 1), (4, 5, 1, 1)],
    (3, 2): [(0, 2, 1, 1), (4, 6, 1, 1)],
}
for _g in [(0, 1), (3, 1), (3, 2)]:
    _TERMS[(-_g[0], -_g[1])] = [(j, i, c, e) for i, j, c, e in _TERMS[_g]]

# an entry of x_gamma(r) equal to +-r, used to read coordinates
_PROBE = {g: next((i, j, c) for i, j, c, e in _TERMS[g] if abs(c) == 1 and e == 1)
          for g in ROOTS}

Q_INT = np.zeros((7, 7), dtype=np.int64)
Q_INT[0, 6] = Q_INT[6, 0] = 1
Q_INT[1, 5] = Q_INT[5, 1] = 1
Q_INT[2, 4] = Q_INT[4, 2] = -1
Q_INT[3, 3] = 2


class NotInG2(ValueError):
    pass


@dataclass(frozen=True)
class Bruhat:
    """g = u * t * w_rep * u' with coordinates read in the standard order."""
    u: tuple          # coordinates on POSITIVE
    t: tuple          # (t1, t2) with t = h(t1, t2)
    word: str
    up: tuple         # coordinates on inversion_set(word)


class G2:
    """The group G2(F_q) with its root data, Weyl representatives and cells."""

    def __init__(self, F: FieldSpec):
        self.F = F
        self.q = F.q
        self.I = np.eye(7, dtype=np.int64)
        self.Q = self.const(Q_INT)
        # g^{-1} = Q^{-1} g^T Q; both Q and Q^{-1} are antidiagonal
        s = [int(Q_INT[6 - j, j]) for j in range(7)]
        qi = [int(F.inv(F.elt(x))) for x in s]
        self._inv_coeff = np.array(
            [[F.mul(qi[i], F.elt(s[j])) for j in range(7)] for i in range(7)],
            dtype=np.int64)

    # -- basic matrix operations --------------------------------------
    def const(self, A) -> np.ndarray:
        return np.vectorize(self.F.elt, otypes=[np.int64])(np.asarray(A))

    def mul(self, *mats) -> np.ndarray:
        return reduce(self.F.matmul, mats)

    def inv(self, g) -> np.ndarray:
        """Inverse of an element of SO(Q) (valid for batches)."""
        g = np.asarray(g)
        gt = np.swapaxes(g[..., ::-1, ::-1], -1, -2)
        return np.asarray(self.F.mul(self._inv_coeff, gt), dtype=np.int64)

    def preserves_form(self, g) -> bool:
        g = np.asarray(g)
        gt = np.swapaxes(g, -1, -2)
        return bool(np.all(self.mul(gt, self.Q, g) == self.Q))

    def det(self, g) -> int:
        """Determinant of a single matrix by elimination."""
        F = self.F
        M = [[int(x) for x in row] for row in np.asarray(g)]
        d = 1
        for c in range(7):
            piv = next((r for r in range(c, 7) if M[r][c]), None)
            if piv is None:
                return 0
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                d = int(F.neg(d))
            d = int(F.mul(d, M[c][c]))
            ic = int(F.inv(M[c][c]))
            for r in range(c + 1, 7):
                if M[r][c]:
                    fac = int(F.mul(M[r][c], ic))
                    M[r] = [int(F.sub(x, F.mul(fac, y))) for x, y in zip(M[r], M[c])]
        return d

    # -- root subgroups -------------------------------------------------
    def x(self, gamma, r) -> np.ndarray:
        """x_gamma(r); r may be an array of codes, giving a batch."""
        F = self.F
        gamma = as_root(gamma)
        r = np.asarray(r, dtype=np.int64)
        out = np.broadcast_to(self.I, r.shape + (7, 7)).copy()
        for i, j, c, e in _TERMS[gamma]:
            val = F.mul(F.elt(c), F.pow(r, e))
            out[..., i, j] = F.add(out[..., i, j], val)
        return out

    def u_elt(self, coords, roots=POSITIVE) -> np.ndarray:
        """Ordered product of x_gamma(coords[k]) over roots (batched)."""
        coords = [np.asarray(c, dtype=np.int64) for c in coords]
        shape = np.broadcast_shapes(*[c.shape for c in coords]) if coords else ()
        out = np.broadcast_to(self.I, shape + (7, 7)).copy()
        for g, c in zip(roots, coords):
            out = self.F.matmul(out, self.x(g, np.broadcast_to(c, shape)))
        return out

    def v_elt(self, r1, r2, r3, r4, r5) -> np.ndarray:
        """The element (r1,...,r5) of V."""
        return self.u_elt([r1, r2, r3, r4, r5], V_ROOTS)

    def peel(self, g, roots=POSITIVE):
        """Coordinates c with g = prod x_gamma(c_k), or None if no such c."""
        g = np.array(g, dtype=np.int64)
        F = self.F
        coords = []
        for gamma in roots:
            i, j, sgn = _PROBE[gamma]
            c = int(g[i, j]) if sgn == 1 else int(F.neg(g[i, j]))
            coords.append(c)
            if c:
                g = F.matmul(self.x(gamma, F.neg(c)), g)
        if not np.array_equal(g, self.I):
            return None
        return tuple(coords)

    def peel_many(self, g, roots=POSITIVE):
        """Batched peel: (coords of shape (n, len(roots)), ok mask)."""
        F = self.F
        g = np.array(g, dtype=np.int64)
        coords = np.zeros((len(g), len(roots)), dtype=np.int64)
        for k, gamma in enumerate(roots):
            i, j, sgn = _PROBE[gamma]
            c = g[:, i, j] if sgn == 1 else F.neg(g[:, i, j])
            coords[:, k] = c
            g = F.matmul(self.x(gamma, F.neg(c)), g)
        ok = np.all(g == self.I, axis=(1, 2))
        return coords, ok

    # -- Weyl elements and torus ----------------------------------------
    def w(self, gamma, t=1) -> np.ndarray:
        F = self.F
        gamma = as_root(gamma)
        neg = (-gamma[0], -gamma[1])
        return self.mul(self.x(gamma, t), self.x(neg, F.neg(F.inv(t))), self.x(gamma, t))

    def h_root(self, gamma, t) -> np.ndarray:
        return self.mul(self.w(gamma, t), self.inv(self.w(gamma, 1)))

    def h(self, t1, t2) -> np.ndarray:
        """h(t1,t2) = diag(t1, t2, 1/(t1 t2), 1, t1 t2, 1/t2, 1/t1)."""
        F = self.F
        t1, t2 = np.asarray(t1, dtype=np.int64), np.asarray(t2, dtype=np.int64)
        if np.any(t1 == 0) or np.any(t2 == 0):
            raise ValueError("torus parameters must be nonzero")
        ab = F.mul(t1, t2)
        diag = [t1, t2, F.inv(ab), np.ones_like(t1), ab, F.inv(t2), F.inv(t1)]
        shape = np.broadcast_shapes(t1.shape, t2.shape)
        out = np.zeros(shape + (7, 7), dtype=np.int64)
        for k, d in enumerate(diag):
            out[..., k, k] = d
        return out

    def h_from_roots(self, t1, t2) -> np.ndarray:
        """h_alpha(t1 t2) h_beta(t1^2 t2), straight from the definition."""
        F = self.F
        return self.mul(self.h_root(ALPHA, F.mul(t1, t2)),
                        self.h_root(BETA, F.mul(F.mul(t1, t1), t2)))

    def torus_params(self, t):
        """(t1, t2) if t is diagonal of the form h(t1, t2), else None."""
        t = np.asarray(t)
        if np.any(t[~np.eye(7, dtype=bool)] != 0):
            return None
        t1, t2 = int(t[0, 0]), int(t[1, 1])
        if t1 == 0 or t2 == 0 or not np.array_equal(t, self.h(t1, t2)):
            return None
        return (t1, t2)

    def word_elt(self, word: str) -> np.ndarray:
        """Product of w_alpha, w_beta along the word."""
        mats = [self.w(ALPHA if s == "a" else BETA) for s in word]
        return self.mul(self.I, *mats)

    @cached_property
    def w1(self) -> np.ndarray:
        wa, wb = self.w(ALPHA), self.w(BETA)
        return self.mul(wb, wa, wb, self.inv(wa), self.inv(wb))

    @cached_property
    def w2(self) -> np.ndarray:
        wa, wb = self.w(ALPHA), self.w(BETA)
        return self.mul(self.h(1, self.F.neg(1)), wa, wb, wa, self.inv(wb), self.inv(wa))

    @cached_property
    def wl(self) -> np.ndarray:
        return self.mul(self.w(BETA), self.w2)

    @cached_property
    def weyl_reps(self) -> dict[str, np.ndarray]:
        """Fixed representative for each of the 12 Weyl elements.

        Plain products of w_alpha, w_beta, except that the three nontrivial
        Bessel-support elements use w1, w2 and w_l = w_beta w2."""
        reps = {wd: self.word_elt(wd) for wd in WEYL_WORDS}
        reps[W1_WORD] = self.w1
        reps[W2_WORD] = self.w2
        reps[W_LONG] = self.wl
        return reps

    @cached_property
    def _patterns(self) -> dict[tuple, str]:
        out = {}
        for wd, m in self.weyl_reps.items():
            mp = m[np.ix_(PERM, PERM)]
            out[tuple(int(np.nonzero(mp[:, j])[0][0]) for j in range(7))] = wd
        assert len(out) == 12
        return out

    def weyl_sign_table(self) -> dict:
        """Signs c with w_s x_gamma(r) w_s^{-1} = x_{s gamma}(c r)."""
        F = self.F
        out = {}
        for s in "ab":
            ws = self.w(ALPHA if s == "a" else BETA)
            for g in ROOTS:
                img = self.mul(ws, self.x(g, 1), self.inv(ws))
                tgt = reflect(s, g)
                c = self.peel(img, [tgt])
                if c is None:
                    raise AssertionError(f"w_{s} does not map U_{g} to U_{tgt}")
                out[(s, root_name(g))] = signed(F, c[0])
        return out

    # -- named subgroups ------------------------------------------------
    def m_embed(self, m) -> np.ndarray:
        """GL2 -> M: m -> diag(m, det^-1, 1, det, m*) with m* = J ^t m^-1 J."""
        F = self.F
        m = np.asarray(m, dtype=np.int64)
        a, b, c, d = (int(m[0, 0]), int(m[0, 1]), int(m[1, 0]), int(m[1, 1]))
        det = int(F.sub(F.mul(a, d), F.mul(b, c)))
        di = int(F.inv(det))
        # m^-1 = di * [[d,-b],[-c,a]]; m* = J (m^-1)^T J
        mi = [[F.mul(di, d), F.mul(di, F.neg(b))], [F.mul(di, F.neg(c)), F.mul(di, a)]]
        mstar = [[mi[1][1], mi[0][1]], [mi[1][0], mi[0][0]]]
        g = np.zeros((7, 7), dtype=np.int64)
        g[0:2, 0:2] = m
        g[2, 2] = di
        g[3, 3] = 1
        g[4, 4] = det
        g[5:7, 5:7] = np.array(mstar, dtype=np.int64)
        return g

    def in_g2(self, g) -> bool:
        try:
            self.bruhat(g)
            return True
        except NotInG2:
            return False

    def in_U(self, g) -> bool:
        return self.peel(g, POSITIVE) is not None

    def in_T(self, g) -> bool:
        return self.torus_params(g) is not None

    def in_B(self, g) -> bool:
        t = np.asarray(g) * np.eye(7, dtype=np.int64)
        if self.torus_params(t) is None:
            return False
        return self.in_U(self.mul(self.inv(t), g))

    def m_part(self, g):
        """The GL2 block if g lies in M, else None."""
        g = np.asarray(g)
        m = g[0:2, 0:2]
        F = self.F
        det = F.sub(F.mul(m[0, 0], m[1, 1]), F.mul(m[0, 1], m[1, 0]))
        if int(det) == 0:
            return None
        return m.copy() if np.array_equal(self.m_embed(m), g) else None

    def in_M(self, g) -> bool:
        return self.m_part(g) is not None

    def levi_split(self, g, radical):
        """(m, coords) with g = m_embed(m) * prod x_gamma over radical."""
        g = np.asarray(g)
        m = g[0:2, 0:2]
        F = self.F
        det = F.sub(F.mul(m[0, 0], m[1, 1]), F.mul(m[0, 1], m[1, 0]))
        if int(det) == 0:
            return None
        rest = self.mul(self.inv(self.m_embed(m)), g)
        c = self.peel(rest, radical)
        return None if c is None else (m.copy(), c)

    def in_V(self, g) -> bool:
        return self.peel(g, V_ROOTS) is not None

    def in_Z(self, g) -> bool:
        return self.peel(g, Z_ROOTS) is not None

    def in_P(self, g) -> bool:
        return self.levi_split(g, V_ROOTS) is not None

    def j_split(self, g):
        """(m, (r1..r5)) with g = m * (r1,...,r5), m in SL2, or None."""
        out = self.levi_split(g, V_ROOTS)
        if out is None:
            return None
        m = out[0]
        F = self.F
        if int(F.sub(F.mul(m[0, 0], m[1, 1]), F.mul(m[0, 1], m[1, 0]))) != 1:
            return None
        return out

    def in_J(self, g) -> bool:
        return self.j_split(g) is not None

    def in_UH(self, g) -> bool:
        return self.peel(g, UH_ROOTS) is not None

    def in_Ubeta(self, g) -> bool:
        return self.peel(g, [BETA]) is not None

    def in_H(self, g) -> bool:
        """H = G2 meet the stabilizer of span(e0, e1)."""
        g = np.asarray(g)
        return bool(np.all(g[2:, 0:2] == 0)) and self.in_g2(g)

    def in_Pprime(self, g) -> bool:
        """P' = M'V' with U_alpha in the Levi: B cup B s_alpha B."""
        try:
            return self.bruhat(g).word in ("", "a")
        except NotInG2:
            return False

    def in_Vprime(self, g) -> bool:
        return self.peel(g, [(0, 1), (1, 1), (2, 1), (3, 1), (3, 2)]) is not None

    def member(self, tag: str, g) -> bool:
        table = {"B": self.in_B, "U": self.in_U, "T": self.in_T, "P": self.in_P,
                 "M": self.in_M, "V": self.in_V, "Z": self.in_Z, "J": self.in_J,
                 "P'": self.in_Pprime, "V'": self.in_Vprime, "H": self.in_H,
                 "U_H": self.in_UH, "U_beta": self.in_Ubeta,
                 "N_SL2": self.in_Ubeta}
        if tag not in table:
            raise ValueError(f"unknown subgroup {tag!r}")
        return table[tag](g)

    def j_twist(self, g) -> np.ndarray:
        wa, wb = self.w(ALPHA), self.w(BETA)
        return self.mul(wb, wa, g, self.inv(wa), self.inv(wb))

    # -- Bruhat decomposition -------------------------------------------
    def bruhat(self, g) -> Bruhat:
        """Decompose g = u t w u' with u in U, t in T, u' in U_w.

        Raises NotInG2 when g is not an element of G2(F_q)."""
        F = self.F
        g = np.asarray(g, dtype=np.int64)
        if g.shape != (7, 7) or not self.preserves_form(g):
            raise NotInG2("matrix does not preserve Q")
        M = [[int(x) for x in row] for row in g[np.ix_(PERM, PERM)]]
        free = set(range(7))
        prow = []
        for j in range(7):
            cand = [r for r in free if M[r][j]]
            if not cand:
                raise NotInG2("singular matrix")
            i = max(cand)
            free.discard(i)
            prow.append(i)
            inv = int(F.inv(M[i][j]))
            for r in range(i):
                if M[r][j]:
                    c = int(F.mul(M[r][j], inv))
                    M[r] = [int(F.sub(a, F.mul(c, b))) for a, b in zip(M[r], M[i])]
        word = self._patterns.get(tuple(prow))
        if word is None:
            raise NotInG2("permutation is not a Weyl element")
        b2 = np.zeros((7, 7), dtype=np.int64)
        for j, i in enumerate(prow):
            inv = int(F.inv(M[i][j]))
            b2[j] = [int(F.mul(inv, a)) for a in M[i]]
        up_mat = np.zeros((7, 7), dtype=np.int64)
        up_mat[np.ix_(PERM, PERM)] = b2
        inv_set = inversion_set(word)
        up = self.peel(up_mat, inv_set)
        if up is None:
            raise NotInG2("right factor not in U_w")
        wrep = self.weyl_reps[word]
        b = self.mul(g, self.inv(up_mat), self.inv(wrep))
        t = b * np.eye(7, dtype=np.int64)
        tp = self.torus_params(t)
        if tp is None:
            raise NotInG2("torus part not of the form h(t1, t2)")
        u = self.peel(self.mul(b, self.inv(t)), POSITIVE)
        if u is None:
            raise NotInG2("left factor not in U")
        return Bruhat(u, tp, word, up)

    @cached_property
    def _pattern_codes(self) -> dict[int, int]:
        """Base-7 code of a pivot pattern -> index into WEYL_WORDS."""
        return {sum(i * 7 ** j for j, i in enumerate(pat)): WEYL_WORDS.index(wd)
                for pat, wd in self._patterns.items()}

    def bruhat_many(self, g):
        """Batched Bruhat decomposition of trusted elements of G2.

        Returns (u, t, widx, up): u of shape (n, 6), t of shape (n, 2), the
        index of the word in WEYL_WORDS, and up of shape (n, 6) holding the
        coordinates on inversion_set(word) left-aligned, zero padded."""
        F = self.F
        g = np.asarray(g, dtype=np.int64).reshape(-1, 7, 7)
        n = len(g)
        ar = np.arange(n)
        M = g[:, PERM][:, :, PERM].copy()
        free = np.ones((n, 7), dtype=bool)
        prow = np.zeros((n, 7), dtype=np.int64)
        rows = np.arange(7)
        for j in range(7):
            nz = (M[:, :, j] != 0) & free
            if not nz.any(axis=1).all():
                raise NotInG2("singular matrix")
            i = 6 - np.argmax(nz[:, ::-1], axis=1)
            free[ar, i] = False
            prow[:, j] = i
            piv = M[ar, i]
            c = F.mul(M[:, :, j], F.inv(piv[:, j])[:, None])
            c = np.where(rows[None, :] < i[:, None], c, 0)
            M = F.sub(M, F.mul(c[:, :, None], piv[:, None, :]))
        codes = prow @ (7 ** np.arange(7))
        table = self._pattern_codes
        try:
            widx = np.array([table[int(k)] for k in codes], dtype=np.int64)
        except KeyError:
            raise NotInG2("permutation is not a Weyl element") from None
        b2 = M[ar[:, None], prow]
        b2 = F.mul(b2, F.inv(b2[:, rows, rows])[:, :, None])
        up_mat = np.zeros_like(b2)
        up_mat[:, np.array(PERM)[:, None], np.array(PERM)[None, :]] = b2
        up = np.zeros((n, 6), dtype=np.int64)
        reps = np.stack([self.weyl_reps[w] for w in WEYL_WORDS])
        b = F.matmul(g, self.inv(up_mat))
        b = F.matmul(b, self.inv(reps[widx]))
        for k, wd in enumerate(WEYL_WORDS):
            sel = np.nonzero(widx == k)[0]
            roots = inversion_set(wd)
            if len(sel) and roots:
                c, ok = self.peel_many(up_mat[sel], roots)
                if not ok.all():
                    raise NotInG2("right factor not in U_w")
                up[sel, :len(roots)] = c
        t = np.stack([b[:, 0, 0], b[:, 1, 1]], axis=1)
        tinv = self.h(F.inv(t[:, 0]), F.inv(t[:, 1]))
        u, ok = self.peel_many(F.matmul(b, tinv), POSITIVE)
        if not ok.all():
            raise NotInG2("left factor not in U")
        return u, t, widx, up

    def compose(self, data: Bruhat) -> np.ndarray:
        return self.mul(self.u_elt(data.u), self.h(*data.t),
                        self.weyl_reps[data.word],
                        self.u_elt(data.up, inversion_set(data.word)))

    # -- enumeration ----------------------------------------------------
    def field_grid(self, n: int, nonzero: bool = False) -> np.ndarray:
        """All n-tuples of field codes, shape (q^n, n)."""
        vals = range(1, self.q) if nonzero else range(self.q)
        if n == 0:
            return np.zeros((1, 0), dtype=np.int64)
        return np.array(list(itertools.product(vals, repeat=n)), dtype=np.int64).reshape(-1, n)

    def cell_reps(self, word: str) -> np.ndarray:
        """All w_rep * u' with u' in U_w: the B-cosets inside B w B."""
        roots = inversion_set(word)
        grid = self.field_grid(len(roots))
        up = self.u_elt(grid.T, roots) if roots else self.I[None]
        return self.F.matmul(self.weyl_reps[word], up)

    def all_U(self) -> np.ndarray:
        return self.u_elt(self.field_grid(6).T)

    def all_T(self) -> np.ndarray:
        g = self.field_grid(2, nonzero=True)
        return self.h(g[:, 0], g[:, 1])

    def order(self) -> int:
        q = self.q
        return q ** 6 * (q - 1) ** 2 * sum(q ** len(w) for w in WEYL_WORDS)

    def cell_sizes(self) -> dict[str, int]:
        q = self.q
        b = q ** 6 * (q - 1) ** 2
        return {w: b * q ** len(w) for w in WEYL_WORDS}

    def enumerate_cosets(self, K: str) -> np.ndarray:
        """One representative per right coset K g, for K in {B, U, U_H}.

        Representatives are the Bruhat normal forms w u' (B), t w u' (U) and
        x_alpha(a) x_{alpha+beta}(b) t w u' (U_H)."""
        if K not in ("B", "U", "U_H"):
            raise ValueError(f"cosets of {K!r} are not supported")
        F = self.F
        reps = np.concatenate([self.cell_reps(w) for w in WEYL_WORDS])
        if K == "B":
            return reps
        T = self.all_T()
        reps = F.matmul(T[:, None], reps[None]).reshape(-1, 7, 7)
        if K == "U":
            return reps
        X = self.u_elt(self.field_grid(2).T, [(1, 0), (1, 1)])
        return F.matmul(X[:, None], reps[None]).reshape(-1, 7, 7)

    def uh_coset(self, g):
        """(a, b, t, w, u') with g in U_H x_alpha(a) x_{alpha+beta}(b) t w u'."""
        d = self.bruhat(g)
        a, b = self.split_u_uh(d.u)
        return (a, b, d.t, d.word, d.up)

    def split_u_uh(self, coords):
        """(a, b) with u = h x_alpha(a) x_{alpha+beta}(b) for some h in U_H."""
        F = self.F
        u = self.u_elt(coords)
        a = coords[0]
        y = self.mul(u, self.x(ALPHA, F.neg(a)))
        c = self.peel(y, [(0, 1), (1, 1), (2, 1), (3, 1), (3, 2)])
        b = c[1]
        h = self.mul(u, self.x((1, 1), F.neg(b)), self.x(ALPHA, F.neg(a)))
        assert self.in_UH(h), "U = U_H X factorization failed"
        return (a, b)

    def census(self, chunk: int = 512) -> dict:
        """Enumerate G2(F_q) cell by cell and count distinct matrices.

        Only practical for q = 3 (about 4.2 million elements)."""
        F = self.F
        U = self.all_U()
        T = self.all_T()
        keys = []
        per_cell = {}
        base = self.q ** np.arange(25, dtype=np.int64)
        base2 = self.q ** np.arange(24, dtype=np.int64)
        for w in WEYL_WORDS:
            R = F.matmul(T[:, None], self.cell_reps(w)[None]).reshape(-1, 7, 7)
            n = 0
            for s in range(0, len(R), chunk):
                G = F.matmul(U[:, None], R[None, s:s + chunk]).reshape(-1, 49)
                keys.append(np.stack([G[:, :25] @ base, G[:, 25:] @ base2], axis=1))
                n += len(G)
            per_cell[w] = n
        allk = np.concatenate(keys)
        distinct = len(np.unique(allk, axis=0))
        return {"per_cell": per_cell, "total": int(len(allk)), "distinct": int(distinct),
                "expected": self.order()}


def signed(F: FieldSpec, c: int) -> int:
    """Lift a prime-field code to the integer in (-p/2, p/2)."""
    c = int(c)
    if c >= F.p:
        raise ValueError("not in the prime field")
    return c if c <= F.p // 2 else c - F.p


@lru_cache(maxsize=None)
def group(q: int) -> G2:
    return G2(field_of_order(q))


def root_elt(q: int, gamma, r) -> np.ndarray:
    return group(q).x(gamma, r)


def torus_elt(q: int, t1: int, t2: int) -> np.ndarray:
    return group(q).h(t1, t2)


def bruhat_decompose(q: int, g):
    """(u, t, w_rep, u') as matrices together with the Bruhat record."""
    G = group(q)
    d = G.bruhat(g)
    return (G.u_elt(d.u), G.h(*d.t), G.weyl_reps[d.word],
            G.u_elt(d.up, inversion_set(d.word))), d


def j_twist(q: int, g) -> np.ndarray:
    return group(q).j_twist(g)


def enumerate_cosets(K: str, q: int) -> np.ndarray:
    return group(q).enumerate_cosets(K)


def _extract(G: G2, g, roots):
    return G.peel(g, roots)


def root_map_check(q: int) -> dict:
    """Every x_gamma(r) preserves Q, has det 1, and x(r) x(s) = x(r + s)."""
    G = group(q)
    F = G.F
    r = np.arange(q)
    bad = []
    for gamma in ROOTS:
        X = G.x(gamma, r)
        form = all(G.preserves_form(X[i]) for i in range(q))
        det = all(G.det(X[i]) == 1 for i in range(q))
        prod = F.matmul(X[:, None], X[None, :])
        add = bool(np.all(prod == X[F.add(r[:, None], r[None, :])]))
        if not (form and det and add):
            bad.append({"root": root_name(gamma), "form": form, "det": det, "additive": add})
    return {"q": q, "roots": len(ROOTS), "failures": bad, "ok": not bad}


def commutator_check(q: int) -> dict:
    """Recover structure constants of [x_g(r), x_d(s)] for positive roots.

    The commutator x_g(r) x_d(s) x_g(-r) x_d(-s) is written as the ordered
    product over the positive roots i*g + j*d (height order), and each
    coordinate is required to be c_ij * r^i * s^j for one constant c_ij and
    all (r, s) in F_q^2."""
    G = group(q)
    F = G.F
    grid = [(r, s) for r in range(q) for s in range(q)]
    table = {}
    failures = []
    for g, d in itertools.permutations(POSITIVE, 2):
        targets = {}
        for i in range(1, 4):
            for j in range(1, 4):
                rt = (i * g[0] + j * d[0], i * g[1] + j * d[1])
                if rt in POSITIVE:
                    targets[rt] = (i, j)
        ordered = [rt for rt in POSITIVE if rt in targets]
        consts = None
        for r, s in grid:
            comm = G.mul(G.x(g, r), G.x(d, s), G.x(g, F.neg(r)), G.x(d, F.neg(s)))
            c = G.peel(comm, ordered)
            if c is None:
                failures.append((root_name(g), root_name(d), r, s))
                break
            if consts is None and r == 1 and s == 1:
                consts = c
        if consts is None:
            continue
        for r, s in grid:
            comm = G.mul(G.x(g, r), G.x(d, s), G.x(g, F.neg(r)), G.x(d, F.neg(s)))
            c = G.peel(comm, ordered)
            want = tuple(int(F.mul(k, F.mul(F.pow(r, targets[rt][0]), F.pow(s, targets[rt][1]))))
                         for k, rt in zip(consts, ordered))
            if c != want:
                failures.append((root_name(g), root_name(d), r, s))
                break
        entries = {f"{targets[rt][0]},{targets[rt][1]}": signed(F, k)
                   for k, rt in zip(consts, ordered) if k}
        table[f"[{root_name(g)},{root_name(d)}]"] = entries
    return {"q": q, "constants": table, "failures": failures,
            "weyl_signs": {f"{s}:{g}": c for (s, g), c in G.weyl_sign_table().items()},
            "ok": not failures}
