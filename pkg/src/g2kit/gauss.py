"""Character sums over square and cube classified regions.

A_r(a) is the basic quadratic Gauss sum piece.  The B, C and D families sum
psi(r3) over pairs (r3, r4) in k^x x k^x/{+-1} grouped by the class of the
root t of t + 1/t = -2 - r r4^2 / r3^3; which family applies depends on
q mod 3.  Everything is brute force, then compared with closed forms in
terms of eps0 and sqrt(eps0 q) = eps_psi sqrt(q).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ff import FieldSpec, QuadExt, field_of_order

# labels of the t-classes, by case
LABELS = {
    "1mod3": ("pm1", "cube", "noncube", "outside"),
    "-1mod3": ("pm1", "split", "norm1_cube", "norm1_noncube"),
    "p=3": ("pm1", "split", "quadratic"),
}
FAMILY_CASE = {"B": "1mod3", "C": "-1mod3", "D": "p=3"}


def case_of(q: int) -> str:
    F = field_of_order(q)
    if F.p == 3:
        return "p=3"
    return "1mod3" if q % 3 == 1 else "-1mod3"


@dataclass(frozen=True)
class TClass:
    case: str
    label: str
    t: int  # code of one root in k_2 (base-field elements have code < q)

    @property
    def index(self) -> int:
        return LABELS[self.case].index(self.label)


@dataclass
class SumResult:
    family: str
    index: int | None
    q: int
    value_1: complex
    value_kappa: complex
    closed_form: complex | None = None

    @property
    def difference(self) -> complex:
        return self.value_1 - self.value_kappa

    def ok(self, tol: float = 1e-8) -> bool:
        if self.closed_form is None:
            return True
        return abs(self.difference - self.closed_form) <= tol

    def row(self) -> dict:
        d = {"family": self.family, "index": self.index, "q": self.q,
             "value_1": _c(self.value_1), "value_kappa": _c(self.value_kappa),
             "difference": _c(self.difference)}
        d["closed_form"] = None if self.closed_form is None else _c(self.closed_form)
        d["ok"] = self.ok()
        return d


def _c(z: complex) -> list[float]:
    z = complex(z)
    return [round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0]


@lru_cache(maxsize=None)
def _ext(q: int) -> QuadExt:
    return QuadExt(field_of_order(q))


# -- A ------------------------------------------------------------------

def squares(F: FieldSpec) -> list[int]:
    return sorted({int(F.mul(x, x)) for x in range(1, F.q)})


def sum_A(F: FieldSpec, r: int, a: int = 1) -> complex:
    """A_r(a) = sum over x in k^x2 of psi(a r x)."""
    return complex(sum(F.psi(int(F.mul(a, F.mul(r, x)))) for x in squares(F)))


def a_difference(F: FieldSpec, a: int = 1) -> SumResult:
    """A_1(a) - A_kappa(a) against eps(a) sqrt(eps0 q)."""
    closed = float(F.legendre(a)) * F.sqrt_eps0_q
    return SumResult("A", None, F.q, sum_A(F, 1, a), sum_A(F, F.kappa, a), closed)


# -- t classification ---------------------------------------------------

def z_value(F: FieldSpec, r: int, r3: int, r4: int) -> int:
    """z(r, r3, r4) = -2 - r r4^2 / r3^3."""
    num = F.mul(r, F.mul(r4, r4))
    den = F.pow(r3, 3)
    return int(F.sub(F.neg(F.elt(2)), F.div(num, den)))


def solve_t(F: FieldSpec, z: int) -> int:
    """A root t in k_2 of t^2 - z t + 1 = 0, as a k_2 code."""
    K = _ext(F.q)
    disc = int(F.sub(F.mul(z, z), F.elt(4)))
    half = F.inv(F.elt(2))
    s = F.sqrt(disc)
    if s is not None:
        return K.embed(int(F.mul(F.add(z, s), half)))
    # disc = kappa * y^2, sqrt(disc) = y sqrt(kappa)
    y = F.sqrt(F.div(disc, F.kappa))
    return K.code(F.mul(z, half), F.mul(y, half))


def classify(F: FieldSpec, t: int, case: str) -> str:
    K = _ext(F.q)
    one, mone = K.embed(1), K.embed(int(F.neg(1)))
    if t in (one, mone):
        return "pm1"
    inside = K.in_base(t)
    if case == "p=3":
        return "split" if inside else "quadratic"
    if case == "1mod3":
        if not inside:
            return "outside"
        return "cube" if F.is_cube(t) else "noncube"
    if inside:
        return "split"
    return "norm1_cube" if K.is_cube(t) else "norm1_noncube"


def classify_t(F: FieldSpec, r: int, r3: int, r4: int, case: str | None = None) -> TClass:
    if not r3 or not r4:
        raise ValueError("classify_t needs r3 and r4 nonzero")
    case = case or case_of(F.q)
    t = solve_t(F, z_value(F, r, r3, r4))
    return TClass(case, classify(F, t, case), t)


def half_units(F: FieldSpec) -> list[int]:
    """k^x / {+-1}, the smaller code from each pair."""
    return sorted({min(r, int(F.neg(r))) for r in range(1, F.q)})


def class_census(F: FieldSpec, r: int, case: str | None = None) -> dict[str, int]:
    case = case or case_of(F.q)
    out = dict.fromkeys(LABELS[case], 0)
    for r3 in range(1, F.q):
        for r4 in half_units(F):
            out[classify_t(F, r, r3, r4, case).label] += 1
    return out


# -- B, C, D ------------------------------------------------------------

def region_sums(F: FieldSpec, r: int, case: str) -> dict[str, complex]:
    """sum of psi(r3) over each t-class of (r3, r4) in k^x x k^x/{+-1}."""
    out = dict.fromkeys(LABELS[case], 0j)
    for r3 in range(1, F.q):
        ps = complex(F.psi(r3))
        for r4 in half_units(F):
            out[classify_t(F, r, r3, r4, case).label] += ps
    return out


def closed_forms(F: FieldSpec, family: str) -> list[complex]:
    e0, s = F.eps0, F.sqrt_eps0_q
    lead = [e0 * s, -0.5 * (1 + e0) * s]
    if family == "B":
        return lead + [0j, 0.5 * (1 - e0) * s]
    if family == "C":
        return lead + [0.5 * (1 - e0) * s, 0j]
    if family == "D":
        return lead + [0.5 * (1 - e0) * s]
    raise ValueError(f"unknown family {family!r}")


def sum_family(family: str, q: int) -> list[SumResult]:
    """Brute-force family sums with their closed-form differences."""
    case = FAMILY_CASE.get(family)
    if case is None:
        raise ValueError(f"unknown family {family!r}")
    if case_of(q) != case:
        raise ValueError(f"family {family} needs case {case}, q={q} is {case_of(q)}")
    F = field_of_order(q)
    s1 = region_sums(F, 1, case)
    sk = region_sums(F, F.kappa, case)
    closed = closed_forms(F, family)
    return [SumResult(family, i, q, s1[lab], sk[lab], closed[i])
            for i, lab in enumerate(LABELS[case])]


def mass_check(q: int) -> dict:
    """Each family sums to -(q-1)/2 for r = 1 and r = kappa."""
    F = field_of_order(q)
    case = case_of(q)
    want = -(q - 1) / 2
    got = {r: sum(region_sums(F, r, case).values()) for r in (1, F.kappa)}
    return {"q": q, "case": case, "expected": want,
            "totals": {str(r): _c(v) for r, v in got.items()},
            "ok": all(abs(v - want) < 1e-8 for v in got.values())}


def verify_all(q_A=(3, 5, 7, 9, 11, 13), q_B=(7, 13), q_C=(5, 11), q_D=(3, 9, 27),
               tol: float = 1e-8) -> dict:
    rows = []
    for q in q_A:
        F = field_of_order(q)
        for a in range(1, q):
            rows.append(a_difference(F, a))
    for fam, qs in (("B", q_B), ("C", q_C), ("D", q_D)):
        for q in qs:
            rows.extend(sum_family(fam, q))
    return {"rows": [r.row() for r in rows], "ok": all(r.ok(tol) for r in rows)}
