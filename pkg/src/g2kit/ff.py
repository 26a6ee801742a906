"""Finite fields F_q (q odd) on integer codes.

An element of F_q with q = p^f is stored as the integer ``sum(d_i * p**i)``
where ``d_0 + d_1 t + ... + d_{f-1} t^{f-1}`` is its residue modulo the
field's defining polynomial.  All arithmetic goes through precomputed
tables, so every operation accepts Python ints or numpy integer arrays.
"""

from __future__ import annotations

import json
import math
from functools import cached_property, lru_cache

import numpy as np

MAX_Q = 1 << 16
_FULL_TABLE_LIMIT = 729


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^f; raises ValueError if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    f, r = 0, q
    while r % p == 0:
        r //= p
        f += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, f


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomial helpers over F_p (coefficient lists, low degree first) ---

def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _all_monic(deg: int, p: int):
    for code in range(p ** deg):
        coeffs = [(code // p ** i) % p for i in range(deg)]
        yield coeffs + [1]


def lowest_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Smallest monic irreducible polynomial of degree f over F_p.

    Candidates are ordered by the integer code of their lower coefficients,
    which is lexicographic order on (c_{f-1}, ..., c_0).
    """
    if f == 1:
        return (0, 1)
    for m in _all_monic(f, p):
        if m[0] == 0:
            continue
        ok = True
        for d in range(1, f // 2 + 1):
            for g in _all_monic(d, p):
                if not _poly_mod(m, g, p):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return tuple(m)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class FieldSpec:
    """The field F_q with a fixed generator kappa and additive character psi.

    Attributes
    ----------
    p, f, q : characteristic, degree, order
    modulus : defining polynomial coefficients, constant term first
    kappa : code of the smallest primitive element
    """

    def __init__(self, p: int, f: int = 1):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if p == 2:
            raise ValueError("characteristic 2 is not supported")
        if f < 1:
            raise ValueError("degree must be positive")
        q = p ** f
        if q > MAX_Q:
            raise ValueError(f"q={q} exceeds {MAX_Q}")
        self.p, self.f, self.q = p, f, q
        self.modulus = lowest_irreducible(p, f)
        self._build_tables()

    # -- construction -------------------------------------------------
    def _build_tables(self) -> None:
        p, f, q = self.p, self.f, self.q
        codes = np.arange(q)
        self.powp = p ** np.arange(f)
        self.digits = (codes[:, None] // self.powp[None, :]) % p

        # multiplication by t as an F_p-linear map on digit vectors
        mult_t = np.zeros((f, f), dtype=np.int64)
        for i in range(f - 1):
            mult_t[i + 1, i] = 1
        mult_t[:, f - 1] = [(-c) % p for c in self.modulus[:f]]
        self._mult_t = mult_t

        kappa = self._find_primitive()
        self.kappa = kappa
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        kap_mat = self._mult_matrix(kappa)
        vec = np.zeros(f, dtype=np.int64)
        vec[0] = 1
        for m in range(q - 1):
            c = int(vec @ self.powp)
            exp[m] = c
            log[c] = m
            vec = (kap_mat @ vec) % p
        assert int(vec @ self.powp) == 1 and (log[1:] >= 0).all()
        self.exp, self.log = exp, log

        self.neg_tab = self.from_digits((-self.digits) % p)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (q - 1)]
        self.inv_tab = inv
        if q <= _FULL_TABLE_LIMIT:
            a, b = np.meshgrid(codes, codes, indexing="ij")
            self.add_tab = self.from_digits((self.digits[a] + self.digits[b]) % p)
            self.mul_tab = self._mul_log(a, b)
        else:
            self.add_tab = None
            self.mul_tab = None

        # trace Tr_{F_q/F_p} is F_p-linear; evaluate it on the power basis
        basis_tr = []
        for i in range(f):
            x = p ** i
            s, y = 0, x
            for _ in range(f):
                s = self.add(s, y)
                y = self.pow(y, p)
            assert s < p
            basis_tr.append(s)
        self.trace_tab = (self.digits @ np.array(basis_tr)) % p
        self.psi_tab = np.exp(2j * np.pi * self.trace_tab / p)
        leg = np.zeros(q, dtype=np.int64)
        leg[1:] = np.where(log[1:] % 2 == 0, 1, -1)
        self.legendre_tab = leg

    def _mult_matrix(self, c: int) -> np.ndarray:
        """Matrix of x -> c*x acting on digit vectors."""
        f, p = self.f, self.p
        out = np.zeros((f, f), dtype=np.int64)
        t_pow = np.eye(f, dtype=np.int64)
        for d in self.digits[c]:
            out = (out + d * t_pow) % p
            t_pow = (self._mult_t @ t_pow) % p
        return out

    def _slow_mul(self, a: int, b: int) -> int:
        vec = (self._mult_matrix(a) @ self.digits[b]) % self.p
        return int(vec @ self.powp)

    def _slow_pow(self, a: int, e: int) -> int:
        r, base = 1, a
        while e:
            if e & 1:
                r = self._slow_mul(r, base)
            base = self._slow_mul(base, base)
            e >>= 1
        return r

    def _find_primitive(self) -> int:
        n = self.q - 1
        primes = _prime_factors(n)
        for c in range(2 if self.q > 2 else 1, self.q):
            if all(self._slow_pow(c, n // ell) != 1 for ell in primes):
                return c
        raise RuntimeError("no primitive element")  # unreachable

    # -- conversions --------------------------------------------------
    def from_digits(self, d) -> np.ndarray:
        return np.asarray(d) @ self.powp

    def elt(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.q)

    @property
    def units(self) -> np.ndarray:
        return np.arange(1, self.q)

    # -- arithmetic ---------------------------------------------------
    def add(self, a, b):
        if self.f == 1:
            return (a + b) % self.p
        if self.add_tab is not None:
            return self.add_tab[a, b]
        return self.from_digits((self.digits[a] + self.digits[b]) % self.p)

    def neg(self, a):
        if self.f == 1:
            return (-a) % self.p
        return self.neg_tab[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def _mul_log(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def mul(self, a, b):
        if self.f == 1:
            return (a * b) % self.p
        if self.mul_tab is not None:
            return self.mul_tab[a, b]
        out = self._mul_log(a, b)
        return out if out.ndim else int(out)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self.inv_tab[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a_arr = np.asarray(a)
        if a_arr.ndim == 0:
            a = int(a)
            if a == 0:
                return 1 if e == 0 else 0
            return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])
        out = self.exp[(self.log[a_arr] * e) % (self.q - 1)]
        if e == 0:
            return np.ones_like(a_arr)
        return np.where(a_arr == 0, 0, out)

    def sum(self, a, axis=None):
        """Field sum along an axis (all entries when axis is None)."""
        a = np.asarray(a)
        if self.f == 1:
            return a.sum(axis=axis) % self.p
        if axis is None:
            return int(self.from_digits(self.digits[a.ravel()].sum(axis=0) % self.p))
        axis = axis % a.ndim
        return self.from_digits(self.digits[a].sum(axis=axis) % self.p)

    def sqrt(self, a: int) -> int | None:
        """A square root of a, or None if a is a non-square."""
        a = int(a)
        if a == 0:
            return 0
        la = int(self.log[a])
        if la % 2:
            return None
        return int(self.exp[la // 2])

    def is_cube(self, a: int) -> bool:
        a = int(a)
        if a == 0:
            return True
        g = math.gcd(3, self.q - 1)
        return int(self.log[a]) % g == 0

    # -- matrices -----------------------------------------------------
    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.f == 1:
            return np.matmul(A, B) % self.p
        prod = self.mul(A[..., :, :, None], B[..., None, :, :])
        return self.from_digits(self.digits[prod].sum(axis=-3) % self.p)

    def mat_inv(self, A) -> np.ndarray:
        """Inverse of a single square matrix by Gauss-Jordan elimination."""
        A = np.array(A, dtype=np.int64)
        n = A.shape[0]
        M = [[int(x) for x in row] + [1 if i == j else 0 for j in range(n)]
             for i, row in enumerate(A)]
        for c in range(n):
            piv = next((r for r in range(c, n) if M[r][c]), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            M[c], M[piv] = M[piv], M[c]
            ic = int(self.inv(M[c][c]))
            M[c] = [int(self.mul(ic, x)) for x in M[c]]
            for r in range(n):
                if r != c and M[r][c]:
                    fac = M[r][c]
                    M[r] = [int(self.sub(x, self.mul(fac, y))) for x, y in zip(M[r], M[c])]
        return np.array([row[n:] for row in M], dtype=np.int64)

    # -- characters ---------------------------------------------------
    def psi(self, x, a: int = 1):
        """psi_a(x) = exp(2 pi i Tr(a x) / p)."""
        if a == 1:
            return self.psi_tab[x]
        return self.psi_tab[self.mul(a, x)]

    def chi(self, j: int, x):
        """Multiplicative character chi_j(kappa^m) = exp(2 pi i j m / (q-1)).

        The value at 0 is returned as 0 (chi_j(0) is not defined)."""
        x = np.asarray(x)
        val = np.exp(2j * np.pi * j * self.log[x] / (self.q - 1))
        return np.where(x == 0, 0, val)

    def chi_table(self, j: int) -> np.ndarray:
        return self.chi(j, np.arange(self.q))

    def legendre(self, x):
        return self.legendre_tab[x]

    @property
    def eps0(self) -> int:
        return int(self.legendre_tab[self.neg(1)])

    @cached_property
    def eps_psi(self) -> complex:
        """The measured 4th root of unity with sum_x psi(x^2) = eps_psi sqrt(q)."""
        g = gauss_quad(self, 1) / math.sqrt(self.q)
        roots = [1, 1j, -1, -1j]
        best = min(roots, key=lambda r: abs(g - r))
        if abs(g - best) > 1e-9:
            raise ArithmeticError(f"quadratic Gauss sum off the unit circle: {g}")
        return complex(best)

    @property
    def sqrt_eps0_q(self) -> complex:
        """sqrt(eps0 q) in the branch fixed by psi: eps_psi * sqrt(q)."""
        return self.eps_psi * math.sqrt(self.q)

    # -- misc ---------------------------------------------------------
    def descriptor(self) -> dict:
        return {"p": self.p, "f": self.f, "q": self.q,
                "modulus": list(self.modulus), "kappa": int(self.kappa)}

    def to_json(self) -> str:
        return json.dumps(self.descriptor())

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q}, kappa={self.kappa})"


@lru_cache(maxsize=None)
def build_field(p: int, f: int = 1) -> FieldSpec:
    """Cached constructor; the same (p, f) always yields the same object."""
    return FieldSpec(p, f)


def field_of_order(q: int) -> FieldSpec:
    p, f = prime_power(q)
    return build_field(p, f)


def legendre(F: FieldSpec, x) -> int:
    return int(F.legendre_tab[x])


def gauss_quad(F: FieldSpec, a: int) -> complex:
    """sum over x in F_q of psi(a x^2); a must be nonzero."""
    if int(a) == 0:
        raise ValueError("gauss_quad needs a nonzero scaling")
    xs = np.arange(F.q)
    return complex(F.psi(F.mul(a, F.mul(xs, xs))).sum())


class QuadExt:
    """The quadratic extension k_2 = k[sqrt(kappa)].

    Elements are pairs (a, b) meaning a + b sqrt(kappa), coded as a + q*b.
    """

    def __init__(self, F: FieldSpec):
        self.F = F
        self.q = F.q
        self.order = F.q ** 2

    def code(self, a: int, b: int) -> int:
        return int(a) + self.q * int(b)

    def pair(self, c: int) -> tuple[int, int]:
        return int(c) % self.q, int(c) // self.q

    def add(self, x, y):
        F = self.F
        (a, b), (c, d) = self.pair(x), self.pair(y)
        return self.code(F.add(a, c), F.add(b, d))

    def mul(self, x, y):
        F = self.F
        (a, b), (c, d) = self.pair(x), self.pair(y)
        re = F.add(F.mul(a, c), F.mul(F.kappa, F.mul(b, d)))
        im = F.add(F.mul(a, d), F.mul(b, c))
        return self.code(re, im)

    def conj(self, x):
        a, b = self.pair(x)
        return self.code(a, self.F.neg(b))

    def norm(self, x) -> int:
        F = self.F
        a, b = self.pair(x)
        return int(F.sub(F.mul(a, a), F.mul(F.kappa, F.mul(b, b))))

    def trace(self, x) -> int:
        a, _ = self.pair(x)
        return int(self.F.add(a, a))

    def pow(self, x, e: int):
        r, base = 1, x
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            e >>= 1
        return r

    def inv(self, x):
        n = self.norm(x)
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in k_2")
        a, b = self.pair(self.conj(x))
        ni = self.F.inv(n)
        return self.code(self.F.mul(a, ni), self.F.mul(b, ni))

    def embed(self, a: int) -> int:
        return self.code(a, 0)

    def in_base(self, x) -> bool:
        return self.pair(x)[1] == 0

    def is_cube(self, x) -> bool:
        """Cube test in k_2^x by exponent arithmetic."""
        if x == 0:
            return True
        return self.pow(x, (self.order - 1) // math.gcd(3, self.order - 1)) == 1

    @cached_property
    def generator(self) -> int:
        n = self.order - 1
        primes = _prime_factors(n)
        for c in range(2, self.order):
            if self.norm(c) and all(self.pow(c, n // ell) != 1 for ell in primes):
                return c
        raise RuntimeError("no generator of k_2^x")  # unreachable

    @cached_property
    def log_table(self) -> dict[int, int]:
        g, x, out = self.generator, 1, {}
        for m in range(self.order - 1):
            out[x] = m
            x = self.mul(x, g)
        return out

    def sqrt(self, x):
        """Some square root of x in k_2 (every base-field element has one)."""
        if x == 0:
            return 0
        m = self.log_table[x]
        if m % 2:
            return None
        return self.pow(self.generator, m // 2)


def norm_one_subgroup(F: FieldSpec) -> dict:
    """The norm-one subgroup k_2^1 with a generator and its cube classes."""
    K = QuadExt(F)
    elts = [c for c in range(K.order) if K.norm(c) == 1]
    g = K.pow(K.generator, F.q - 1)
    cubes = {c for c in elts if K.is_cube(c)}
    return {
        "ext": K,
        "elements": elts,
        "generator": g,
        "cubes": sorted(cubes),
        "order": len(elts),
    }

