"""Conjugacy classes of the Fourier-Jacobi group J = SL2 x| V.

Two tables are encoded: one for p > 3 and one for p = 3 (where
x_{2a+b}(r3) becomes central and an extra family appears).  Each table
lists the classes meeting SL2 x| Z outside the elliptic elements; the
classes it leaves out carry character zero and are accounted for by three
aggregate rows so that the class equation closes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .g2core import G2, group
from .smallrep import InducedRep, _weil, pr_bar, sl2_elements, m_embed_many

ALPHA, BETA = (1, 0), (0, 1)
R2AB, R3AB, R3A2B = (2, 1), (3, 1), (3, 2)


@dataclass
class ClassRecord:
    family: str
    params: tuple
    rep: np.ndarray = field(repr=False)
    class_size: int
    centralizer_order: int
    formula: str                # the printed character column entry

    def row(self) -> dict:
        return {"family": self.family, "params": list(self.params),
                "class_size": self.class_size,
                "centralizer_order": self.centralizer_order,
                "formula": self.formula}


@dataclass
class ClassTable:
    q: int
    case: str                   # "p>3" or "p=3"
    records: list[ClassRecord]
    aggregates: dict[str, int]  # zero-character remainder, by kind

    @property
    def order_J(self) -> int:
        q = self.q
        return q ** 6 * (q * q - 1)

    def mass(self) -> int:
        return sum(r.class_size for r in self.records) + sum(self.aggregates.values())

    def family_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.records:
            out[r.family] = out.get(r.family, 0) + 1
        return out


def _half_units(F) -> list[int]:
    """k^x / {+-1}: the smaller code from each pair {r, -r}."""
    return sorted({min(r, int(F.neg(r))) for r in range(1, F.q)})


def _split_x(F) -> list[int]:
    """x != +-1 up to x -> 1/x (h(x,1/x) and h(1/x,x) are conjugate in SL2)."""
    out = set()
    for x in range(1, F.q):
        if x in (1, int(F.neg(1))):
            continue
        out.add(min(x, int(F.inv(x))))
    return sorted(out)


def classes(q: int, case: str | None = None) -> ClassTable:
    G = group(q)
    F = G.F
    p = F.p
    auto = "p=3" if p == 3 else "p>3"
    case = case or auto
    if case != auto:
        raise ValueError(f"case {case!r} does not match p = {p}")
    qq = q * q
    orderJ = q ** 6 * (qq - 1)
    I7 = G.I
    hm = G.h(F.neg(1), F.neg(1))
    recs: list[ClassRecord] = []

    def add(family, params, rep, size, formula):
        assert orderJ % size == 0
        recs.append(ClassRecord(family, tuple(params), rep, size, orderJ // size, formula))

    def z(r3, r4=0, r5=0):
        return G.u_elt([r3, r4, r5], [R2AB, R3AB, R3A2B])

    kappa = F.kappa
    add("1", (), I7, 1, "q(q+1)")
    if case == "p>3":
        add("(0,0,0,0,1)", (), z(0, 0, 1), qq - 1, "q(q+1)")
        for r3 in range(1, q):
            add("(0,0,r3,0,0)", (r3,), z(r3), qq, "q(q+1)psi(r3)")
    else:
        add("x_{3a+2b}(1)", (), z(0, 0, 1), qq - 1, "q(q+1)")
        for r3 in range(1, q):
            add("x_{2a+b}(r3)", (r3,), z(r3), 1, "q(q+1)psi(r3)")
        for r3 in range(1, q):
            add("x_{2a+b}(r3)x_{3a+2b}(1)", (r3,), z(r3, 0, 1), qq - 1, "q(q+1)psi(r3)")
    for b, sign in ((1, "+"), (kappa, "-")):
        xb = G.x(BETA, b)
        for r3 in range(q):
            add("x_b(b)x_{2a+b}(r3)", (b, r3), G.mul(xb, z(r3)), (qq - 1) * qq // 2,
                f"{sign}sqrt(eps0 q)psi(r3)")
    for b, sign in ((1, "+"), (kappa, "-")):
        xb = G.x(BETA, b)
        for r3 in range(q):
            for r4 in _half_units(F):
                add("x_b(b)x_{2a+b}(r3)x_{3a+b}(r4)", (b, r3, r4), G.mul(xb, z(r3, r4)),
                    (qq - 1) * qq, f"{sign}sqrt(eps0 q)psi(r3)")
    for r3 in range(q):
        add("h(-1,-1)x_{2a+b}(r3)", (r3,), G.mul(hm, z(r3)), q ** 4,
            "(q+1)chi(-1)eps0 psi(r3)")
    for b in (1, kappa):
        xb = G.x(BETA, b)
        for r3 in range(q):
            add("h(-1,-1)x_b(b)x_{2a+b}(r3)", (b, r3), G.mul(hm, xb, z(r3)),
                (qq - 1) * q ** 4 // 2, "eps0 chi(-1)psi(r3)")
    for x in _split_x(F):
        hx = G.h(x, F.inv(x))
        for r3 in range(q):
            add("h(x,1/x)x_{2a+b}(r3)", (x, r3), G.mul(hx, z(r3)), q ** 5 * (q + 1),
                "eps(x)(chi(x)+chi(1/x))psi(r3)")
    aggregates = {
        "V not conjugate into Z": q ** 5 - q ** 3,
        "unipotent times V, remainder": (qq - 1) * (q ** 5 - q ** 4),
        "elliptic times V": q ** 6 * (q - 1) ** 2 // 2,
    }
    return ClassTable(q, case, recs, aggregates)


# expected "No." column of the printed tables
def expected_counts(q: int, case: str) -> dict[str, int]:
    half = (q - 1) // 2
    common = {
        "1": 1,
        "x_b(b)x_{2a+b}(r3)": 2 * q,
        "x_b(b)x_{2a+b}(r3)x_{3a+b}(r4)": 2 * q * half,
        "h(-1,-1)x_{2a+b}(r3)": q,
        "h(-1,-1)x_b(b)x_{2a+b}(r3)": 2 * q,
    }
    if (q - 3) // 2:
        common["h(x,1/x)x_{2a+b}(r3)"] = q * (q - 3) // 2
    if case == "p>3":
        common.update({"(0,0,0,0,1)": 1, "(0,0,r3,0,0)": q - 1})
    else:
        common.update({"x_{3a+2b}(1)": 1, "x_{2a+b}(r3)": q - 1,
                       "x_{2a+b}(r3)x_{3a+2b}(1)": q - 1})
    return common


# -- character column ---------------------------------------------------

def printed_value(rec: ClassRecord, j: int, q: int) -> complex:
    """Value of the printed column entry of rec at chi_j."""
    G = group(q)
    F = G.F
    s = F.sqrt_eps0_q
    eps0 = F.eps0
    chm1 = complex(F.chi(j, int(F.neg(1))))
    r3 = rec.params[-1] if rec.params else 0
    if rec.family in ("x_b(b)x_{2a+b}(r3)x_{3a+b}(r4)",):
        r3 = rec.params[1]
    ps = complex(F.psi(r3)) if rec.params else 1.0
    f = rec.formula
    if f == "q(q+1)":
        return q * (q + 1)
    if f == "q(q+1)psi(r3)":
        return q * (q + 1) * ps
    if f == "+sqrt(eps0 q)psi(r3)":
        return s * ps
    if f == "-sqrt(eps0 q)psi(r3)":
        return -s * ps
    if f == "(q+1)chi(-1)eps0 psi(r3)":
        return (q + 1) * chm1 * eps0 * ps
    if f == "eps0 chi(-1)psi(r3)":
        return eps0 * chm1 * ps
    if f == "eps(x)(chi(x)+chi(1/x))psi(r3)":
        x = rec.params[0]
        chi = complex(F.chi(j, x)) + complex(F.chi(j, int(F.inv(x))))
        return float(F.legendre(x)) * chi * ps
    raise KeyError(f)


def printed_value_literal(rec: ClassRecord, j: int, q: int) -> complex:
    """The split-torus row read with the bare Legendre sign eps = eps0."""
    if rec.formula != "eps(x)(chi(x)+chi(1/x))psi(r3)":
        return printed_value(rec, j, q)
    F = group(q).F
    x, r3 = rec.params
    chi = complex(F.chi(j, x)) + complex(F.chi(j, int(F.inv(x))))
    return F.eps0 * chi * complex(F.psi(r3))


def trace_character(G: G2, g, j: int) -> complex:
    """Tr of I(chi_j) x omega_psi at g in J, by explicit matrices."""
    split = G.j_split(g)
    if split is None:
        raise ValueError("not in J")
    m = split[0]
    I = InducedRep(G.F, j)
    ch_i = I.character((int(m[0, 0]), int(m[0, 1]), int(m[1, 0]), int(m[1, 1])))
    gh = pr_bar(G, g)
    ch_w = complex(np.trace(_weil(G.q, 1).op(*gh)))
    return ch_i * ch_w


def char_column(j: int, table: ClassTable, tol: float = 1e-8) -> dict:
    """Direct traces against the printed column; one entry per record."""
    G = group(table.q)
    rows, failures = [], []
    for rec in table.records:
        got = trace_character(G, rec.rep, j)
        want = printed_value(rec, j, table.q)
        ok = abs(got - want) <= tol * max(1.0, abs(want))
        rows.append({"family": rec.family, "params": list(rec.params),
                     "trace": got, "printed": want, "ok": ok})
        if not ok:
            failures.append((rec.family, rec.params))
    return {"q": table.q, "chi": j, "rows": rows, "failures": failures,
            "ok": not failures}


# -- verification ------------------------------------------------------

def all_J(G: G2) -> np.ndarray:
    F = G.F
    gs = np.array(sl2_elements(F), dtype=np.int64).reshape(-1, 2, 2)
    M = m_embed_many(G, gs)
    V = G.v_elt(*G.field_grid(5).T)
    return F.matmul(M[:, None], V[None]).reshape(-1, 7, 7)


def _keys(G: G2, mats) -> np.ndarray:
    mats = np.asarray(mats).reshape(len(mats), 49)
    base = G.q ** np.arange(25, dtype=np.int64)
    base2 = G.q ** np.arange(24, dtype=np.int64)
    return np.stack([mats[:, :25] @ base, mats[:, 25:] @ base2], axis=1)


def verify_classes(table: ClassTable) -> dict:
    """Orbit enumeration (q = 3) or centralizer counts (larger q)."""
    G = group(table.q)
    F = G.F
    J = all_J(G) if table.q <= 3 else None
    failures = []
    for rec in table.records:
        if not G.in_J(rec.rep):
            failures.append(("not in J", rec.family, rec.params))
    if J is not None:
        Jinv = G.inv(J)
        owner: dict[tuple, int] = {}
        covered = 0
        for k, rec in enumerate(table.records):
            orb = F.matmul(F.matmul(J, rec.rep), Jinv)
            keys = {tuple(x) for x in _keys(G, orb)}
            if len(keys) != rec.class_size:
                failures.append(("orbit size", rec.family, rec.params, len(keys)))
            for key in keys:
                if key in owner:
                    failures.append(("conjugate", rec.family, rec.params,
                                     table.records[owner[key]].family))
                    break
                owner[key] = k
            covered += len(keys)
        remainder = len(J) - len(owner)
        agg = sum(table.aggregates.values())
        if remainder != agg:
            failures.append(("remainder", remainder, agg))
        # every element outside the listed classes has character zero
        zero_ok = True
        keys_all = _keys(G, J)
        rest = [i for i, key in enumerate(map(tuple, keys_all)) if key not in owner]
        for i in rest[::max(1, len(rest) // 400)]:
            for j in range(F.q - 1):
                if abs(trace_character(G, J[i], j)) > 1e-8:
                    zero_ok = False
        if not zero_ok:
            failures.append(("nonzero character off the table",))
        return {"q": table.q, "mode": "orbits", "order_J": len(J), "covered": covered,
                "remainder": remainder, "failures": failures, "ok": not failures}
    for rec in table.records:
        c = centralizer_order(G, rec.rep)
        if c != rec.centralizer_order:
            failures.append(("centralizer", rec.family, rec.params, c))
    return {"q": table.q, "mode": "centralizers", "failures": failures, "ok": not failures}


def centralizer_order(G: G2, t, chunk: int = 1 << 16) -> int:
    """|C_J(t)| by scanning all of J in chunks."""
    F = G.F
    gs = np.array(sl2_elements(F), dtype=np.int64).reshape(-1, 2, 2)
    M = m_embed_many(G, gs)
    V = G.v_elt(*G.field_grid(5).T)
    count = 0
    for m in M:
        h = F.matmul(m, V)
        count += int(np.all(F.matmul(h, t) == F.matmul(t, h), axis=(1, 2)).sum())
    return count


def class_equation(q: int) -> dict:
    t = classes(q)
    counts = t.family_counts()
    want = expected_counts(q, t.case)
    return {"q": q, "case": t.case, "mass": t.mass(), "order_J": t.order_J,
            "counts_ok": counts == want, "ok": t.mass() == t.order_J and counts == want}
