"""Restricted character tables of cuspidal G2(q) characters and the pairing
<Pi|_J, I(chi) x omega_psi>.

Tables are data: each printed row is a tuple of row keys followed by one
expression per column.  Expressions are arithmetic in q and, where the
printed value carries a unit such as eps(pi_2) or eps(k, l), in u.  A "*"
marks a blank cell; reading one is an error.

Row keys name J-classes the way the printed rows do.  row_key() sends each
jclasses record to its key, using the square class of r3 (relative to b),
the cube class of r4, and the t-classes from gauss.
"""

from __future__ import annotations

import ast
import operator
from dataclasses import dataclass, field
from fractions import Fraction

from . import gauss
from .ff import field_of_order
from .jclasses import ClassRecord, ClassTable, classes, printed_value

UNUSED = "*"


class UnusedCell(LookupError):
    """A blank table cell was read."""


# -- expression evaluation ------------------------------------------------

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow}


def evaluate(expr: str, q, u=1):
    """Evaluate a table entry; only + - * / ** and the names q, u are allowed."""
    env = {"q": Fraction(q), "u": u}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name) and node.id in env:
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"bad table expression {expr!r}")

    return ev(ast.parse(expr, mode="eval"))


# -- printed tables -------------------------------------------------------

_DEG2 = "(q**2-1)*(q**6-1)/(q+1)**2"
_DEG3 = "(q**2-1)*(q**6-1)/(q**2+q+1)"
_DEG6 = "(q**2-1)*(q**6-1)/(q**2-q+1)"
_LONG = ("-(q-1)*(q**2-q+1)", "(q-1)*(q**2-1)", "-(q+1)*(q**2-1)")
_SHORT = ("(q-1)*(2*q-1)", "-q**2+1", "-q**2+1")
_C6 = ("-4*q+1", "q+1", "-q+1")      # centralizer 6q^4
_C3 = ("-q+1", "-2*q+1", "2*q+1")    # centralizer 3q^4
_C2 = ("-2*q+1", "-q+1", "q+1")      # centralizer 2q^4

_XB = ("x_b(1)", "x_b(k)")
_H_XB = ("h(-1,-1)x_b(1)", "h(-1,-1)x_b(k)")
_H_XB_X2 = ("h(-1,-1)x_b(1)x_2ab(sq)", "h(-1,-1)x_b(1)x_2ab(ksq)",
            "h(-1,-1)x_b(k)x_2ab(sq)", "h(-1,-1)x_b(k)x_2ab(ksq)")
_HX = ("h(x,1/x)", "h(x,1/x)x_2ab(r3)")


def _r4(label: str) -> tuple[str, str]:
    return (f"x_b(1)(0,0,r3,r4,0)[{label}]", f"x_b(k)(0,0,r3,r4,0)[{label}]")


# Character table of X_i(pi_i), p > 3: rows common to both residues of q mod 3
X_COMMON = [
    (("1",), (_DEG2, _DEG3, _DEG6)),
    (("(0,0,0,0,1)",), _LONG),
    (("(0,0,r3,0,0)",), _SHORT),
    (_XB, _LONG),
    (("h(-1,-1)",), ("(q-1)**2*u", "0", "0")),
    (("h(-1,-1)(0,0,r3,0,0)",), ("-(q-1)*u", "0", "0")),
    (_H_XB, ("-(q-1)*u", "0", "0")),
    (_H_XB_X2, ("u", "0", "0")),
    (_HX, ("0", "0", "0")),
    (("elliptic",), (UNUSED, UNUSED, UNUSED)),
]

# missing part when q = 1 mod 3
X_1MOD3 = [
    (("x_b(1)x_2ab(sq)",), _C6),
    (("x_b(1)x_2ab(ksq)",), _C2),
    (("x_b(k)x_2ab(sq)",), _C2),
    (("x_b(k)x_2ab(ksq)",), _C6),
    (("x_b(1)x_3ab(cube)",), _C6),
    (("x_b(1)x_3ab(noncube)",), _C3),
    (("x_b(k)x_3ab(kcube)",), _C6),
    (("x_b(k)x_3ab(nonkcube)",), _C3),
    (_r4("pm1"), _SHORT),
    (_r4("cube"), _C6),
    (_r4("noncube"), _C3),
    (_r4("outside"), _C2),
]

# missing part when q = -1 mod 3
X_M1MOD3 = [
    (("x_b(1)x_2ab(sq)",), _C2),
    (("x_b(1)x_2ab(ksq)",), _C6),
    (("x_b(k)x_2ab(sq)",), _C6),
    (("x_b(k)x_2ab(ksq)",), _C2),
    (("x_b(1)x_3ab", "x_b(k)x_3ab"), _C2),
    (_r4("pm1"), _SHORT),
    (_r4("split"), _C2),
    (_r4("norm1_cube"), _C6),
    (_r4("norm1_noncube"), _C3),
]

_Z4 = ("0", "0", "0", "0")

# Y_1..Y_4, p > 3 (Y_1 on the unipotent rows comes from the sub-tables below)
Y_COMMON = [
    (("1", "(0,0,0,0,1)", "(0,0,r3,0,0)"), _Z4),
    (("h(-1,-1)", "h(-1,-1)(0,0,r3,0,0)") + _H_XB, _Z4),
    (("h(-1,-1)x_b(1)x_2ab(sq)", "h(-1,-1)x_b(k)x_2ab(ksq)"), ("0", "q", "0", "0")),
    (("h(-1,-1)x_b(1)x_2ab(ksq)", "h(-1,-1)x_b(k)x_2ab(sq)"), ("0", "-q", "0", "0")),
    (_HX, _Z4),
    (("elliptic",), (UNUSED, UNUSED, UNUSED, UNUSED)),
]


def _y(y1: str) -> tuple[str, str, str, str]:
    return (y1, "0", "0", "0")


Y_1MOD3 = [
    (_XB, _y("0")),
    (("x_b(1)x_2ab(sq)", "x_b(k)x_2ab(ksq)"), _y("q**2")),
    (("x_b(1)x_2ab(ksq)", "x_b(k)x_2ab(sq)"), _y("-q**2")),
    (("x_b(1)x_3ab(cube)", "x_b(1)x_3ab(noncube)",
      "x_b(k)x_3ab(kcube)", "x_b(k)x_3ab(nonkcube)"), _y("q**2")),
    (_r4("pm1"), _y("0")),
    (_r4("cube") + _r4("noncube"), _y("q**2")),
    (_r4("outside"), _y("-q**2")),
]

Y_M1MOD3 = [
    (_XB, _y("0")),
    (("x_b(1)x_2ab(sq)", "x_b(k)x_2ab(ksq)"), _y("q**2")),
    (("x_b(1)x_2ab(ksq)", "x_b(k)x_2ab(sq)"), _y("-q**2")),
    (("x_b(1)x_3ab", "x_b(k)x_3ab"), _y("q**2")),
    (_r4("pm1"), _y("0")),
    (_r4("split"), _y("q**2")),
    (_r4("norm1_cube") + _r4("norm1_noncube"), _y("-q**2")),
]

# p = 3: chi_12(k,l), chi_13(k), chi_14(k)
_SUBREG3 = ("2*q**2-2*q+1", "-(q**2+q-1)", "-(q**2-q-1)")
_G3 = ("-(2*q-1)", "-(q-1)", "q+1")
CHI_P3 = [
    (("1",), (_DEG2, _DEG3, _DEG6)),
    (("x_3a2b(1)", "x_2ab(r3)") + _XB, _LONG),
    (("x_2ab(r3)x_3a2b(1)",), _SUBREG3),
    (("x_b(1)x_2ab(sq)", "x_b(1)x_2ab(ksq)", "x_b(k)x_2ab(sq)", "x_b(k)x_2ab(ksq)"), _G3),
    (("x_b(1)x_3ab", "x_b(k)x_3ab"), _G3),
    (_r4("pm1"), _SUBREG3),
    (_r4("split") + _r4("quadratic"), _G3),
    (("h(-1,-1)",), ("(q-1)**2*u", "0", "0")),
    (("h(-1,-1)(0,0,r3,0,0)",) + _H_XB, ("-(q-1)*u", "0", "0")),
    (_H_XB_X2, ("u", "0", "0")),
    (_HX, ("0", "0", "0")),
    (("elliptic",), (UNUSED, UNUSED, UNUSED)),
]

# p = 3: theta_5, theta_10, theta_11, theta_12(k)
_T_LONG = ("0", "q*(q-1)*(2*q-1)/6", "-q*(q-1)/2", "-q*(q**2-1)/3")
_T_SQ = ("0", "q*(q+1)/6", "-q*(q-1)/2", "q*(q+1)/3")
_T_NSQ = ("0", "-q*(q-1)/6", "q*(q+1)/2", "-q*(q-1)/3")
THETA_P3 = [
    (("1",), ("q**6", "q*(q-1)**2*(q**2-q+1)/6", "q*(q-1)*(q**3-1)/2", "q*(q**2-1)**2/3")),
    (("x_3a2b(1)", "x_2ab(r3)") + _XB, _T_LONG),
    (("x_2ab(r3)x_3a2b(1)",), ("0", "-q*(3*q-1)/6", "-q*(q-1)/2", "q/3")),
    (("x_b(1)x_2ab(sq)", "x_b(k)x_2ab(ksq)"), _T_SQ),
    (("x_b(1)x_2ab(ksq)", "x_b(k)x_2ab(sq)"), _T_NSQ),
    (("x_b(1)x_3ab", "x_b(k)x_3ab"), _T_SQ),
    # theta_12 on this row is printed as -q/3; these classes are G2-conjugate
    # to x_2ab(1)x_3a2b(1), where the table gives q/3, and only q/3 is
    # compatible with the pairing vanishing (see THETA12_PM1_PRINTED)
    (_r4("pm1"), ("0", "-q*(3*q-1)/6", "-q*(q-1)/2", "q/3")),
    (_r4("split"), _T_SQ),
    (_r4("quadratic"), _T_NSQ),
    (("h(-1,-1)",), ("q**2", "-(q-1)**2/2", "-(q-1)**2/2", "0")),
    (("h(-1,-1)(0,0,r3,0,0)",) + _H_XB, ("0", "(q-1)/2", "(q-1)/2", "0")),
    (("h(-1,-1)x_b(1)x_2ab(sq)", "h(-1,-1)x_b(k)x_2ab(ksq)"),
     ("0", "-(q+1)/2", "(q-1)/2", "0")),
    (("h(-1,-1)x_b(1)x_2ab(ksq)", "h(-1,-1)x_b(k)x_2ab(sq)"),
     ("0", "(q-1)/2", "-(q+1)/2", "0")),
    (("h(x,1/x)",), ("q", "0", "0", "0")),
    (("h(x,1/x)x_2ab(r3)",), _Z4),
    (("elliptic",), (UNUSED, UNUSED, UNUSED, UNUSED)),
]


THETA12_PM1_PRINTED = "-q/3"


@dataclass
class ClassFunctionFormula:
    name: str
    case: str
    entries: dict[str, str]
    unit: complex = 1       # value substituted for eps(pi_2) / eps(k,l)
    expected: Fraction | None = None

    def value(self, key: str, q: int) -> complex:
        try:
            e = self.entries[key]
        except KeyError:
            raise KeyError(f"{self.name}: no table row for class {key!r}") from None
        if e == UNUSED:
            raise UnusedCell(f"{self.name}: blank cell at {key!r}")
        return complex(evaluate(e, q, self.unit))

    def degree(self, q: int):
        return evaluate(self.entries["1"], q, self.unit)

    def with_unit(self, unit: complex) -> "ClassFunctionFormula":
        return ClassFunctionFormula(self.name, self.case, self.entries, unit, self.expected)


@dataclass
class Combination:
    """A rational combination of table characters (e.g. X_33, X_17)."""
    name: str
    parts: list[tuple[Fraction, ClassFunctionFormula]]
    expected: Fraction | None = None
    case: str = field(default="p>3")

    def value(self, key: str, q: int) -> complex:
        return sum(complex(c) * f.value(key, q) for c, f in self.parts)

    def with_unit(self, unit: complex) -> "Combination":
        return Combination(self.name, [(c, f.with_unit(unit)) for c, f in self.parts],
                           self.expected, self.case)


def _build(names, rows, case, expected) -> list[ClassFunctionFormula]:
    out = [ClassFunctionFormula(n, case, {}, 1, expected.get(n)) for n in names]
    for keys, vals in rows:
        if len(vals) != len(names):
            raise ValueError(f"row {keys} has {len(vals)} entries")
        for k in keys:
            for f, v in zip(out, vals):
                if k in f.entries:
                    raise ValueError(f"duplicate row {k!r} in {f.name}")
                f.entries[k] = v
    return out


def residue_case(q: int) -> str:
    return gauss.case_of(q)


def restricted_table(case: str, q: int) -> list[ClassFunctionFormula]:
    """The table characters applicable to q, keyed by J-class row keys."""
    rc = residue_case(q)
    if case == "p>3":
        if rc == "p=3":
            raise ValueError("p>3 tables need p > 3")
        one = Fraction(1)
        zero = Fraction(0)
        xm = X_1MOD3 if rc == "1mod3" else X_M1MOD3
        ym = Y_1MOD3 if rc == "1mod3" else Y_M1MOD3
        xs = _build(("X2", "X3", "X6"), X_COMMON + xm, case, dict.fromkeys(("X2", "X3", "X6"), one))
        ys = _build(("Y1", "Y2", "Y3", "Y4"), Y_COMMON + ym, case,
                    dict.fromkeys(("Y1", "Y2", "Y3", "Y4"), zero))
        return xs + ys
    if case == "p=3":
        if rc != "p=3":
            raise ValueError("p=3 tables need characteristic 3")
        exp = {"chi12": Fraction(1), "chi13": Fraction(1), "chi14": Fraction(1),
               "theta10": Fraction(0), "theta11": Fraction(0), "theta12": Fraction(0)}
        return (_build(("chi12", "chi13", "chi14"), CHI_P3, case, exp)
                + _build(("theta5", "theta10", "theta11", "theta12"), THETA_P3, case, exp))
    raise ValueError(f"unknown case {case!r}")


def combinations(q: int) -> list[Combination]:
    """X_33 = -X_2/3 + X_6/3 and X_17 = -X_2/6 + X_6/6 - Y_1/2 + Y_2/2."""
    t = {f.name: f for f in restricted_table("p>3", q)}
    F = Fraction
    return [
        Combination("X33", [(F(-1, 3), t["X2"]), (F(1, 3), t["X6"])], F(0)),
        Combination("X17", [(F(-1, 6), t["X2"]), (F(1, 6), t["X6"]),
                            (F(-1, 2), t["Y1"]), (F(1, 2), t["Y2"])], F(0)),
    ]


# -- J-class to row key -----------------------------------------------------

def _sq_tag(F, x) -> str:
    return "sq" if F.sqrt(x) is not None else "ksq"


def row_key(rec: ClassRecord, q: int) -> str:
    F = field_of_order(q)
    rc = gauss.case_of(q)
    fam, p = rec.family, rec.params
    if fam == "1":
        return "1"
    if fam in ("(0,0,0,0,1)", "(0,0,r3,0,0)"):
        return fam
    if fam == "x_{3a+2b}(1)":
        return "x_3a2b(1)"
    if fam == "x_{2a+b}(r3)":
        return "x_2ab(r3)"
    if fam == "x_{2a+b}(r3)x_{3a+2b}(1)":
        return "x_2ab(r3)x_3a2b(1)"
    if fam == "x_b(b)x_{2a+b}(r3)":
        b, r3 = p
        bt = "1" if b == 1 else "k"
        if r3 == 0:
            return f"x_b({bt})"
        return f"x_b({bt})x_2ab({_sq_tag(F, r3)})"
    if fam == "x_b(b)x_{2a+b}(r3)x_{3a+b}(r4)":
        b, r3, r4 = p
        bt = "1" if b == 1 else "k"
        if r3 == 0:
            if rc != "1mod3":
                return f"x_b({bt})x_3ab"
            if b == 1:
                return "x_b(1)x_3ab(" + ("cube" if F.is_cube(r4) else "noncube") + ")"
            kc = F.is_cube(int(F.div(r4, F.kappa)))
            return "x_b(k)x_3ab(" + ("kcube" if kc else "nonkcube") + ")"
        lab = gauss.classify_t(F, b, r3, r4, rc).label
        return f"x_b({bt})(0,0,r3,r4,0)[{lab}]"
    if fam == "h(-1,-1)x_{2a+b}(r3)":
        return "h(-1,-1)" if p[0] == 0 else "h(-1,-1)(0,0,r3,0,0)"
    if fam == "h(-1,-1)x_b(b)x_{2a+b}(r3)":
        b, r3 = p
        bt = "1" if b == 1 else "k"
        if r3 == 0:
            return f"h(-1,-1)x_b({bt})"
        return f"h(-1,-1)x_b({bt})x_2ab({_sq_tag(F, r3)})"
    if fam == "h(x,1/x)x_{2a+b}(r3)":
        return "h(x,1/x)" if p[1] == 0 else "h(x,1/x)x_2ab(r3)"
    raise KeyError(f"unmatched class family {fam!r}")


# -- pairings -------------------------------------------------------------

@dataclass
class PairingResult:
    name: str
    chi: int
    q: int
    value: complex
    expected: Fraction | None
    path: str = "brute"

    def ok(self, tol: float = 1e-6) -> bool:
        if self.expected is None:
            return True
        return abs(self.value - float(self.expected)) <= tol

    def row(self) -> dict:
        return {"name": self.name, "chi": self.chi, "q": self.q, "path": self.path,
                "value": [round(self.value.real, 10) + 0.0, round(self.value.imag, 10) + 0.0],
                "expected": None if self.expected is None else str(self.expected),
                "ok": self.ok()}


def theta5_expected(q: int, j: int) -> Fraction:
    """1 if eps chi != 1, 2 if eps chi = 1 (chi_j = eps iff j = (q-1)/2)."""
    return Fraction(2) if 2 * j == q - 1 else Fraction(1)


def _expected(pi, q, j):
    if getattr(pi, "name", "") == "theta5":
        return theta5_expected(q, j)
    return pi.expected


def pairing(pi, j: int, q: int, path: str = "brute",
            table: ClassTable | None = None) -> PairingResult:
    """<Pi|_J, I(chi_j) x omega_psi> by the brute or closed-form Gauss-sum path."""
    table = table or _table(q)
    fn = {"brute": pairing_brute, "closed": pairing_closed}[path]
    return PairingResult(pi.name, j, q, fn(pi, j, table), _expected(pi, q, j), path)


_TABLES: dict[int, ClassTable] = {}


def _table(q: int) -> ClassTable:
    if q not in _TABLES:
        _TABLES[q] = classes(q)
    return _TABLES[q]


def pairing_brute(pi, j: int, table: ClassTable) -> complex:
    q = table.q
    total = 0j
    for rec in table.records:
        val = pi.value(row_key(rec, q), q)
        total += rec.class_size * val.conjugate() * printed_value(rec, j, q)
    return total / table.order_J


def _region_sum_closed(F, r3s: frozenset) -> complex:
    """Closed form of sum psi(r3) for the r3-sets that occur in one row."""
    q = F.q
    sq = frozenset(int(F.mul(x, x)) for x in range(1, q))
    ksq = frozenset(range(1, q)) - sq
    units = frozenset(range(1, q))
    s = F.eps_psi * q ** 0.5          # sum_x psi(x^2) = 1 + 2 A_1
    if r3s == frozenset({0}):
        return 1.0
    if r3s == units:
        return -1.0
    if r3s == sq:
        return (s - 1) / 2
    if r3s == ksq:
        return (-s - 1) / 2
    raise ValueError("no closed form for this r3 region")


_DIFF_FAMILY = {"1mod3": "B", "-1mod3": "C", "p=3": "D"}


def pairing_closed(pi, j: int, table: ClassTable) -> complex:
    """Same pairing with every psi-sum replaced by its closed form.

    Rows outside the r4 family group by (row key, other parameters); within a
    group the r3 values form {0}, k^x, a square class or its complement.  The
    r4 family with r3 != 0 enters only through B/C/D differences, which needs
    the value on each t-class to agree for b = 1 and b = kappa.
    """
    q = table.q
    F = field_of_order(q)
    rc = gauss.case_of(q)
    groups: dict[tuple, list] = {}
    r4rows: dict[str, dict] = {}
    for rec in table.records:
        key = row_key(rec, q)
        fam = rec.family
        ch = printed_value(rec, j, q)
        if fam == "x_b(b)x_{2a+b}(r3)x_{3a+b}(r4)" and rec.params[1] != 0:
            b, r3, _ = rec.params
            coef = ch / complex(F.psi(r3))
            lab = key.split("[")[1].rstrip("]")
            slot = r4rows.setdefault(lab, {})
            slot.setdefault(b, (rec.class_size, pi.value(key, q), coef))
            continue
        r3 = _r3_of(rec)
        others = tuple(x for i, x in enumerate(rec.params) if i != _r3_index(rec))
        coef = ch / complex(F.psi(r3)) if r3 is not None else ch
        g = groups.setdefault((key, fam, others), [rec.class_size, pi.value(key, q), coef, set()])
        if abs(g[2] - coef) > 1e-9 or g[0] != rec.class_size:
            raise ValueError(f"non-uniform group {key}")
        g[3].add(0 if r3 is None else r3)
    total = 0j
    for (key, fam, others), (size, val, coef, r3s) in groups.items():
        total += size * val.conjugate() * coef * _region_sum_closed(F, frozenset(r3s))
    closed = gauss.closed_forms(F, _DIFF_FAMILY[rc])
    for lab, slot in r4rows.items():
        (s1, v1, c1), (sk, vk, ck) = slot[1], slot[F.kappa]
        if abs(v1 - vk) > 1e-9 or s1 != sk or abs(c1 + ck) > 1e-9:
            raise ValueError(f"t-class {lab}: values differ between b = 1 and b = kappa")
        diff = closed[gauss.LABELS[rc].index(lab)]
        total += s1 * v1.conjugate() * c1 * diff
    return total / table.order_J


def _r3_index(rec: ClassRecord) -> int | None:
    fam = rec.family
    if fam in ("(0,0,r3,0,0)", "x_{2a+b}(r3)", "x_{2a+b}(r3)x_{3a+2b}(1)",
               "h(-1,-1)x_{2a+b}(r3)"):
        return 0
    if fam in ("x_b(b)x_{2a+b}(r3)", "x_b(b)x_{2a+b}(r3)x_{3a+b}(r4)",
               "h(-1,-1)x_b(b)x_{2a+b}(r3)", "h(x,1/x)x_{2a+b}(r3)"):
        return 1
    return None


def _r3_of(rec: ClassRecord):
    i = _r3_index(rec)
    return None if i is None else rec.params[i]


def combination_checks(q: int, tol: float = 1e-6) -> dict:
    """Pairings of X_33 and X_17 for every chi; both must vanish."""
    rows = [pairing(c, j, q) for c in combinations(q) for j in range(q - 1)]
    return {"q": q, "rows": [r.row() for r in rows],
            "implied_zero": ["X18", "X19", "X19bar"],
            "ok": all(r.ok(tol) for r in rows)}


def unit_invariance(pi, q: int, tol: float = 1e-9) -> bool:
    """Pairings do not move when the unit parameter runs over the 4th roots of 1."""
    base = [pairing(pi, j, q, "closed").value for j in range(q - 1)]
    for u in (1j, -1, -1j):
        g = pi.with_unit(u)
        if any(abs(pairing(g, j, q, "closed").value - b) > tol
               for j, b in zip(range(q - 1), base)):
            return False
    return True


def pairing_report(q: int, tol: float = 1e-6) -> dict:
    """Every table character, every chi, both paths; plus combinations for p > 3."""
    case = "p=3" if field_of_order(q).p == 3 else "p>3"
    rows, ok = [], True
    for pi in restricted_table(case, q):
        for j in range(q - 1):
            a = pairing(pi, j, q, "brute")
            b = pairing(pi, j, q, "closed")
            agree = abs(a.value - b.value) <= tol
            ok &= a.ok(tol) and b.ok(tol) and agree
            rows += [a.row(), b.row()]
        inv = unit_invariance(pi, q)
        ok &= inv
        rows.append({"name": pi.name, "q": q, "unit_invariant": inv})
    out = {"q": q, "case": case, "rows": rows}
    if case == "p>3":
        comb = combination_checks(q, tol)
        out["combinations"] = comb
        ok &= comb["ok"]
    out["ok"] = bool(ok)
    return out
