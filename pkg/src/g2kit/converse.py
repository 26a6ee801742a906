"""The converse argument run on concrete Bessel-like data.

Two Bessel-like functions B1, B2 are compared through their twisted gamma
data, following the route of the proof:

1. GL1 twists.  The closed form expresses gamma(B x chi) as a Fourier
   coefficient of a -> B(h(a, 1) w1) eps(a); equal gammas for all chi give
   B1 = B2 on B w1 B by Fourier inversion.
2. GL2 twists.  B = B1 - B2 then lives on B w2 B and B w_l B, and
   Psi(B, M_w2 f_v) = q^3 sum over U_beta\\M of B(m w2) W_v*(m).  If these
   sums vanish for every generic tau and v, the density lemma for GL2 forces
   B(m w2) = 0 for all m, which covers h(x, y) w2 and h(x, y) w_b w2.

For mocks the GL2 hypothesis is checked directly on the sums rather than
derived from a functional equation, which mocks need not satisfy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bessel import BesselLike, random_bessel_like, admissible_tori
from .ff import field_of_order
from .g2core import W1_WORD, W2_WORD, W_LONG, WEYL_WORDS, group
from .gamma_gl1 import gamma_closed, gamma_fe
from .gamma_gl2 import (bessel_on_cosets, w2_cell_sum, psrs_Psi, sections,
                        u_beta_transversal)
from .smallrep import gl2_generic_irreps, gl2_group, m_embed_many, whittaker_basis


class PipelineContradiction(RuntimeError):
    """The gamma data say equal but the cells differ."""


def _c(z) -> list[float]:
    z = complex(z)
    return [round(z.real, 10) + 0.0, round(z.imag, 10) + 0.0]


# -- density -----------------------------------------------------------------

def density_matrix(t: int, q: int, omit=None):
    """Rows: Whittaker functions of the generic irreps of GL_t (psi^-1 model).
    Columns: representatives of N_t\\GL_t.  Returns (matrix, row labels, columns)."""
    F = field_of_order(q)
    if t == 1:
        cols = list(range(1, q))
        labels = [f"chi{j}" for j in range(q - 1)]
        M = np.array([[complex(F.chi(j, x)) for x in cols] for j in range(q - 1)])
    elif t == 2:
        Gl = gl2_group(q)
        reps = u_beta_transversal(q)
        idx = Gl.index_many(reps)
        rows, labels = [], []
        for rep in gl2_generic_irreps(q):
            _, W = whittaker_basis(q, rep)
            for k, w in enumerate(W):
                rows.append(w[idx])
                labels.append(f"{rep.label}#{k}")
        M = np.array(rows)
        cols = [tuple(int(x) for x in r.ravel()) for r in reps]
    else:
        raise ValueError("density is only set up for t = 1, 2")
    if omit is not None:
        keep = [i for i in range(len(labels)) if labels[i] != omit and i != omit]
        M, labels = M[keep], [labels[i] for i in keep]
    return M, labels, cols


def admissible_columns(t: int, q: int) -> int:
    """N_t\\GL_t cosets carrying a nonzero psi_t-equivariant function.

    N_t acts freely on the left, so phi(n g) = psi(n) phi(g) can be
    prescribed independently on every coset."""
    if t == 1:
        return q - 1
    order = (q * q - 1) * (q * q - q)
    return order // q


def density_check(t: int, q: int, omit=None, tol: float = 1e-8) -> dict:
    """Full column rank of the Whittaker evaluation matrix, so that
    sum phi(g) W(g) = 0 for all W forces phi = 0."""
    if t == 2 and q != 3:
        raise ValueError("the t = 2 density matrix is only built for q = 3")
    M, labels, cols = density_matrix(t, q, omit)
    sv = np.linalg.svd(M, compute_uv=False)
    rank = int((sv > tol * max(1.0, sv[0])).sum())
    want = admissible_columns(t, q)
    out = {"t": t, "q": q, "rows": len(labels), "columns": len(cols),
           "admissible": want, "rank": rank, "smallest_singular_value": float(sv[-1]),
           "omitted": omit, "ok": rank == want == len(cols)}
    if rank < len(cols):
        _, _, vh = np.linalg.svd(M)
        out["null_direction"] = [_c(z) for z in vh[-1].conj()]
    return out


@lru_cache(maxsize=None)
def _density_ok(t: int, q: int) -> bool:
    return density_check(t, q)["ok"]


# -- data containers ---------------------------------------------------------

@dataclass
class GammaVector:
    q: int
    gl1: dict = field(default_factory=dict)      # chi -> {"closed": z, "fe": z}
    gl2: dict = field(default_factory=dict)      # tau label -> [(v, gamma)]

    def row(self) -> dict:
        return {"q": self.q,
                "gl1": [{"chi": j, "closed": _c(v["closed"]), "fe": _c(v["fe"])}
                        for j, v in sorted(self.gl1.items())],
                "gl2": [{"tau": t, "per_vector": [{"vector": k, "gamma": _c(g)} for k, g in vs]}
                        for t, vs in self.gl2.items()]}


@dataclass
class CellDiffReport:
    q: int
    per_cell: dict                                # word -> max |B1 - B2|

    @property
    def zero(self) -> bool:
        return all(v == 0 for v in self.per_cell.values())

    def row(self) -> dict:
        return {"q": self.q, "per_cell": {w or "1": round(v, 12) for w, v in self.per_cell.items()},
                "zero": self.zero}


@lru_cache(maxsize=None)
def _u_cosets(q: int):
    G = group(q)
    reps = G.enumerate_cosets("U")
    _, _, widx, _ = G.bruhat_many(reps)
    return reps, widx


def cell_diff(B1: BesselLike, B2: BesselLike, tol: float = 1e-12) -> CellDiffReport:
    """max |B1 - B2| per Bruhat cell, over all of U\\G2.

    B(u g) = psi_U(u) B(g), so equality on U\\G2 is equality on G2."""
    reps, widx = _u_cosets(B1.q)
    d = np.abs(B1.evaluate_many(reps) - B2.evaluate_many(reps))
    d[d < tol] = 0.0
    per = {w: float(d[widx == i].max()) if (widx == i).any() else 0.0
           for i, w in enumerate(WEYL_WORDS)}
    return CellDiffReport(B1.q, per)


def m_in_small_cells(q: int) -> dict:
    """M lies in B and B s_b B, hence misses B w2 B and B w_l B."""
    G = group(q)
    Gl = gl2_group(q)
    _, _, widx, _ = G.bruhat_many(m_embed_many(G, Gl.arr))
    words = sorted({WEYL_WORDS[i] for i in widx}, key=WEYL_WORDS.index)
    return {"q": q, "elements": int(len(widx)), "cells": words,
            "ok": set(words) <= {"", "b"}}


# -- the GL1 step -----------------------------------------------------------

def gl1_gammas(B: BesselLike) -> dict:
    return {j: {"closed": gamma_closed(B, j).value, "fe": gamma_fe(B, j).value}
            for j in range(B.q - 1)}


def invert_gl1(q: int, dgamma) -> np.ndarray:
    """a -> B(h(a, 1) w1) differences from the gamma differences, a = 1..q-1.

    gamma = q^{5/2} / eps_psi * sum_a D(a) eps(a) chi_j^-1(a), inverted by
    orthogonality of the characters of k^x."""
    F = field_of_order(q)
    dg = np.asarray(dgamma, dtype=complex) * F.eps_psi / q ** 2.5
    out = np.zeros(q - 1, dtype=complex)
    for i, a in enumerate(range(1, q)):
        s = sum(dg[j] * complex(F.chi(j, a)) for j in range(q - 1))
        out[i] = float(F.legendre(a)) * s / (q - 1)
    return out


def gl1_step(B1: BesselLike, B2: BesselLike, tol: float = 1e-7, gammas=None) -> dict:
    q = B1.q
    g1, g2 = gammas if gammas is not None else (gl1_gammas(B1), gl1_gammas(B2))
    dg = [g1[j]["closed"] - g2[j]["closed"] for j in range(q - 1)]
    witness = next((j for j in range(q - 1) if abs(dg[j]) > tol), None)
    actual = np.array([B1.value_tw(W1_WORD, (a, 1)) - B2.value_tw(W1_WORD, (a, 1))
                       for a in range(1, q)])
    rec = invert_gl1(q, dg)
    fe_gap = max(abs(g[j]["closed"] - g[j]["fe"]) for g in (g1, g2) for j in range(q - 1))
    out = {"equal_gammas": witness is None, "witness_chi": witness,
           "recovered": [_c(z) for z in rec], "inversion_error": float(np.abs(rec - actual).max()),
           "fe_closed_gap": float(fe_gap)}
    if witness is None:
        d = cell_diff(B1.restrict([W1_WORD]), B2.restrict([W1_WORD])).per_cell[W1_WORD]
        out["w1_cell_diff"] = d
        if d > tol:
            raise PipelineContradiction(f"GL1 gammas agree but B1 - B2 = {d} on B w1 B")
    return out


# -- the GL2 step -----------------------------------------------------------

def _taus(q: int, restricted: bool):
    reps = gl2_generic_irreps(q)
    return [r for r in reps if r.kind == "cusp"] if restricted else list(reps)


def mw2_sums(B: BesselLike, restricted: bool = False) -> list[tuple[str, int, complex]]:
    """(tau, v, sum over U_beta\\M of B(m w2) W_v*(m)) for every generic tau and v."""
    q = B.q
    out = []
    for rep in _taus(q, restricted):
        for sec in sections(q, rep):
            out.append((rep.label, sec.vector, w2_cell_sum(B, sec) / q ** 3))
    return out


def ye_condition(B: BesselLike, tol: float = 1e-9) -> bool:
    """sum over u in N of phi(g1 u g2) = 0 for all g1, g2, with phi(m) = B(m w2)."""
    q = B.q
    G = group(q)
    Gl = gl2_group(q)
    phi = B.evaluate_many(G.F.matmul(m_embed_many(G, Gl.arr), G.w2[None]))
    mt = Gl.mul_table
    # g1 u g2 for all g1, u, g2: mt[mt[g1, u], g2]
    left = mt[:, Gl.N]                                   # (n, |N|)
    s = phi[mt[left[:, :, None], np.arange(Gl.n)[None, None, :]]].sum(axis=1)
    return bool(np.abs(s).max() <= tol)


def gl2_gammas(B: BesselLike, restricted: bool = False) -> dict:
    """Per-vector Psi(B, M f_v) / Psi(B, f_v) where the denominator is nonzero."""
    support = bessel_on_cosets(B)
    out = {}
    for rep in _taus(B.q, restricted):
        vals = []
        for sec in sections(B.q, rep):
            den = psrs_Psi(B, sec, support=support)
            if abs(den) > 1e-9:
                vals.append((sec.vector, psrs_Psi(B, sec, intertwined=True, support=support) / den))
        out[rep.label] = vals
    return out


def gl2_step(B1: BesselLike, B2: BesselLike, cuspidal_vanishing: bool = False,
             restricted: bool = False, tol: float = 1e-7) -> dict:
    q = B1.q
    B = B1 - B2
    off = [w for w, *_ in B.support() if w not in (W2_WORD, W_LONG)]
    if off:
        raise ValueError(f"gl2_step needs B1 - B2 on B w2 B and B w_l B, found {sorted(set(off))}")
    sums = mw2_sums(B, restricted)
    witness = next(((t, v) for t, v, s in sums if abs(s) > tol), None)
    out = {"restricted": restricted,
           "sums": [{"tau": t, "vector": v, "value": _c(s)} for t, v, s in sums],
           "witness": None if witness is None else {"tau": witness[0], "vector": witness[1]}}
    if cuspidal_vanishing:
        support = bessel_on_cosets(B)
        lhs, err = 0.0, 0.0
        for rep in _taus(q, restricted):
            for sec in sections(q, rep):
                lhs = max(lhs, abs(psrs_Psi(B, sec, support=support)))
                full = psrs_Psi(B, sec, intertwined=True, support=support)
                err = max(err, abs(full - w2_cell_sum(B, sec)))
        out["left_side_max"] = float(lhs)
        out["w2_cell_max_error"] = float(err)
    if restricted:
        out["ye_condition"] = ye_condition(B)
    if witness is None:
        dens = _density_ok(2, q) if not restricted else out["ye_condition"]
        out["density"] = dens
        G = group(q)
        Gl = gl2_group(q)
        mw2 = np.abs(B.evaluate_many(G.F.matmul(m_embed_many(G, Gl.arr), G.w2[None]))).max()
        diff = cell_diff(B1.restrict([W2_WORD, W_LONG]), B2.restrict([W2_WORD, W_LONG]))
        out["max_mw2"] = float(mw2)
        out["cell_diff"] = diff.row()
        if dens and not diff.zero:
            raise PipelineContradiction("GL2 sums vanish but B1 - B2 is nonzero on B w2 B or B w_l B")
    return out


# -- the pipeline -------------------------------------------------------------

def compare(B1: BesselLike, B2: BesselLike, cuspidal: bool = False, restricted: bool = False,
            gl2_gamma_values: bool = True, tol: float = 1e-7) -> dict:
    """Run the GL1 and GL2 steps and report a verdict with its witness."""
    q = B1.q
    gv = GammaVector(q)
    g1, g2 = gl1_gammas(B1), gl1_gammas(B2)
    gv.gl1 = {j: {"closed": g1[j]["closed"] - g2[j]["closed"],
                  "fe": g1[j]["fe"] - g2[j]["fe"]} for j in g1}
    report = {"q": q, "provenance": [B1.provenance(), B2.provenance()]}
    s1 = gl1_step(B1, B2, tol, gammas=(g1, g2))
    report["gl1"] = s1
    if not s1["equal_gammas"]:
        verdict, witness = f"distinguished by chi = {s1['witness_chi']}", {"chi": s1["witness_chi"]}
    else:
        s2 = gl2_step(B1, B2, cuspidal, restricted, tol)
        report["gl2"] = s2
        if gl2_gamma_values:
            a, b = gl2_gammas(B1, restricted), gl2_gammas(B2, restricted)
            gv.gl2 = {t: [(k, x - dict(b[t])[k]) for k, x in a[t] if k in dict(b[t])] for t in a}
        if s2["witness"] is None:
            verdict, witness = "equal", None
        else:
            w = s2["witness"]
            verdict, witness = f"distinguished by tau = {w['tau']}, v = {w['vector']}", w
    diff = cell_diff(B1, B2)
    report.update({"verdict": verdict, "witness": witness,
                   "gamma_difference": gv.row(), "cell_diff": diff.row(),
                   "sound": (verdict == "equal") == diff.zero})
    return report


def converse_pipeline(seedA: int, seedB: int, q: int = 3, cuspidal: bool = False,
                      restricted: bool = False) -> dict:
    if q != 3:
        raise ValueError("the pipeline runs at q = 3")
    return compare(random_bessel_like(q, seedA), random_bessel_like(q, seedB),
                   cuspidal, restricted)


def adversarial_pair(seed: int, cells=(W_LONG,), points: int | None = 1,
                     q: int = 3) -> tuple[BesselLike, BesselLike]:
    """B1 random; B2 equal to B1 except at `points` admissible t on each of `cells`."""
    B1 = random_bessel_like(q, seed)
    rng = np.random.default_rng(seed + 1)
    vals = dict(B1.values)
    for w in cells:
        tori = list(admissible_tori(q, w))
        pick = tori if points is None else [tori[i] for i in
                                            rng.choice(len(tori), min(points, len(tori)), replace=False)]
        for t in pick:
            vals[(w, *t)] = vals.get((w, *t), 0) + complex(*rng.normal(size=2))
    return B1, BesselLike(q, vals, None, B1.mask, B1.a)
