"""g2kit command line: run verification suites and write JSON reports.

    g2kit run --suite gauss --q 7
    g2kit gamma-gl1 --q 3 --seed 4 --out report.json
    g2kit converse --q 3 --seedA 1 --seedB 2

Exit status is 0 when every check passes, 1 on a failed check and 2 on a
usage error (bad q, unknown suite, a request over the element budget).
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

import click
import numpy as np

SCHEMA = "g2kit-report/1"
SUITES = ("chevalley", "weil", "classes", "gauss", "pairings",
          "gamma-gl1", "gamma-gl2", "converse")
DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(click.UsageError):
    pass


@dataclass
class RunConfig:
    q: int
    suite: str
    seed: int = 0
    chi: int | None = None
    tau: str | None = None
    tol: float | None = None
    out: str | None = None
    budget: int = DEFAULT_BUDGET
    seed_b: int | None = None
    cuspidal: bool = False
    timings: bool = False

    @property
    def p(self) -> int:
        from .ff import prime_power
        return prime_power(self.q)[0]

    @property
    def f(self) -> int:
        from .ff import prime_power
        return prime_power(self.q)[1]

    def echo(self) -> dict:
        d = {"q": self.q, "p": self.p, "f": self.f, "suite": self.suite, "seed": self.seed,
             "chi": self.chi, "tau": self.tau, "tol": self.tol, "budget": self.budget}
        if self.suite in ("converse", "all"):
            d["seedB"] = self.seed_b
            d["cuspidal"] = self.cuspidal
        return d


@dataclass
class Report:
    config: dict
    checks: list = field(default_factory=list)
    timings: bool = False

    def add(self, name: str, anchor: str, expected, got, ok: bool, runtime: float = 0.0):
        row = {"name": name, "anchor": anchor, "expected": expected, "got": got, "pass": bool(ok)}
        if self.timings:
            row["runtime"] = round(runtime, 3)
        self.checks.append(row)

    def skip(self, name: str, anchor: str, reason: str):
        self.checks.append({"name": name, "anchor": anchor, "expected": None,
                            "got": None, "pass": None, "skipped": reason})

    @property
    def failed(self) -> int:
        return sum(1 for c in self.checks if c["pass"] is False)

    def as_dict(self) -> dict:
        passed = sum(1 for c in self.checks if c["pass"] is True)
        skipped = sum(1 for c in self.checks if c["pass"] is None)
        return {"schema": SCHEMA, "config": self.config, "checks": self.checks,
                "summary": {"checks": len(self.checks), "passed": passed,
                            "failed": self.failed, "skipped": skipped}}


def jsonable(x):
    """Plain JSON types with complex numbers as [re, im] and rounded floats."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        return [round(z.real, 10) + 0.0, round(z.imag, 10) + 0.0]
    if isinstance(x, (float, np.floating)):
        return round(float(x), 10) + 0.0
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    return x


def dumps(report: Report) -> str:
    return json.dumps(jsonable(report.as_dict()), indent=2, ensure_ascii=True) + "\n"


def _timed(fn, *a, **kw):
    t = time.perf_counter()
    out = fn(*a, **kw)
    return out, time.perf_counter() - t


def _need_q3(cfg: RunConfig):
    if cfg.q != 3:
        raise click.UsageError(f"suite {cfg.suite} is only set up for q = 3")


def _check_budget(cfg: RunConfig, what: str, n: int):
    if n > cfg.budget:
        raise BudgetExceeded(f"{what} needs {n} elements, over the budget of {cfg.budget}")


# -- suites ----------------------------------------------------------------

def suite_chevalley(cfg: RunConfig, rep: Report):
    from .g2core import commutator_check, group, root_map_check, WEYL_WORDS, inversion_set
    G = group(cfg.q)
    r, dt = _timed(root_map_check, cfg.q)
    rep.add("root maps: form, det, additivity", "root subgroup matrices", [], r["failures"], r["ok"], dt)
    r, dt = _timed(commutator_check, cfg.q)
    rep.add("commutator structure constants", "Chevalley commutator relations",
            "polynomial in (r, s)", r["constants"], r["ok"], dt)
    sizes = G.cell_sizes()
    want = cfg.q ** 6 * (cfg.q - 1) ** 2 * sum(cfg.q ** len(w) for w in WEYL_WORDS)
    rep.add("cell sizes sum to |G2|", "Bruhat decomposition", want, sum(sizes.values()),
            sum(sizes.values()) == want)
    rng = np.random.default_rng(cfg.seed)
    t = time.perf_counter()
    bad = 0
    for _ in range(200):
        w = WEYL_WORDS[rng.integers(len(WEYL_WORDS))]
        u = [int(x) for x in rng.integers(0, cfg.q, 6)]
        tt = tuple(int(x) for x in rng.integers(1, cfg.q, 2))
        up = [int(x) for x in rng.integers(0, cfg.q, len(inversion_set(w)))]
        g = G.mul(G.u_elt(u), G.h(*tt), G.weyl_reps[w], G.u_elt(up, inversion_set(w)))
        d = G.bruhat(g)
        bad += int(not (d.word == w and tuple(d.t) == tt and list(d.u) == u and list(d.up) == up))
    rep.add("Bruhat normal form round trip", "Bruhat decomposition", 0, bad, bad == 0,
            time.perf_counter() - t)
    if G.order() <= cfg.budget:
        r, dt = _timed(G.census)
        ok = r["total"] == r["distinct"] == r["expected"] and r["per_cell"] == sizes
        rep.add("full group census", "order of G2", r["expected"],
                {"total": r["total"], "distinct": r["distinct"]}, ok, dt)
    else:
        rep.skip("full group census", "order of G2", f"|G2| = {G.order()} over budget")


def suite_weil(cfg: RunConfig, rep: Report):
    from .smallrep import weil_J_homomorphism_check, weil_homomorphism_check
    tol = cfg.tol or 1e-9
    n = cfg.q ** 3 * (cfg.q ** 3 - cfg.q)
    if n * n <= cfg.budget:
        r, dt = _timed(weil_homomorphism_check, cfg.q)
    else:
        r, dt = _timed(weil_homomorphism_check, cfg.q, samples=100000, seed=cfg.seed)
    rep.add(f"omega_psi homomorphism ({r['pairs']} pairs)", "Weil representation of SL2 x Heisenberg",
            0.0, r["max_error"], r["max_error"] <= tol, dt)
    r, dt = _timed(weil_J_homomorphism_check, cfg.q, samples=20000, seed=cfg.seed)
    rep.add("omega_psi through pr_bar on J", "Weil representation pulled back to J",
            0.0, r["max_error"], r["max_error"] <= tol, dt)


def suite_classes(cfg: RunConfig, rep: Report):
    from .jclasses import char_column, class_equation, classes, verify_classes
    tol = cfg.tol or 1e-8
    r, dt = _timed(class_equation, cfg.q)
    rep.add("class equation", "conjugacy classes of J", r["order_J"], r["mass"], r["ok"], dt)
    table = classes(cfg.q)
    order_J = cfg.q ** 6 * (cfg.q ** 2 - 1)
    if cfg.q == 3:
        r, dt = _timed(verify_classes, table)
        rep.add("representatives pairwise non-conjugate", "conjugacy classes of J",
                [], r["failures"], r["ok"], dt)
    else:
        rep.skip("representatives pairwise non-conjugate", "conjugacy classes of J",
                 "orbit enumeration only at q = 3")
    if len(table.records) * order_J <= 50 * cfg.budget or cfg.chi is not None:
        chis = range(cfg.q - 1) if cfg.chi is None else [cfg.chi]
        for j in chis:
            r, dt = _timed(char_column, j, table, tol)
            rep.add(f"character column, chi = {j}", "character of I(chi) x omega_psi",
                    [], r["failures"], r["ok"], dt)


def suite_gauss(cfg: RunConfig, rep: Report):
    from .ff import field_of_order
    from .gauss import FAMILY_CASE, a_difference, case_of, mass_check, sum_family
    tol = cfg.tol or 1e-8
    F = field_of_order(cfg.q)
    rows = [a_difference(F, a) for a in range(1, cfg.q)]
    rep.add("A_1 - A_kappa = eps(a) sqrt(eps0 q)", "basic Gauss sum",
            [r.row()["closed_form"] for r in rows], [r.row()["difference"] for r in rows],
            all(r.ok(tol) for r in rows))
    case = case_of(cfg.q)
    fam = next(k for k, v in FAMILY_CASE.items() if v == case)
    rows = sum_family(fam, cfg.q)
    for r in rows:
        rep.add(f"{fam}_1^{r.index} - {fam}_kappa^{r.index}", f"family {fam} closed form",
                r.row()["closed_form"], r.row()["difference"], r.ok(tol))
    r = mass_check(cfg.q)
    rep.add(f"{fam} family mass", f"family {fam} total", r["expected"], r["totals"], r["ok"])


def suite_pairings(cfg: RunConfig, rep: Report):
    from .chartab import pairing_report
    tol = cfg.tol or 1e-6
    r, dt = _timed(pairing_report, cfg.q, tol)
    rows = [x for x in r["rows"] if "value" in x and x["path"] == "brute"]
    if cfg.chi is not None:
        rows = [x for x in rows if x["chi"] == cfg.chi]
    for x in rows:
        rep.add(f"<{x['name']}, I(chi_{x['chi']}) x omega>", "multiplicity one pairings",
                x["expected"], x["value"], x["ok"])
    inv = [x for x in r["rows"] if "unit_invariant" in x]
    rep.add("pairings independent of the unit parameter", "multiplicity one pairings",
            True, all(x["unit_invariant"] for x in inv), all(x["unit_invariant"] for x in inv))
    if "combinations" in r:
        c = r["combinations"]
        rep.add("X33 and X17 pairings vanish", "multiplicity one pairings", 0,
                [x["value"] for x in c["rows"]], c["ok"])
    rep.add("brute force and closed-form paths agree", "multiplicity one pairings",
            True, r["ok"], r["ok"], dt)


def suite_gamma_gl1(cfg: RunConfig, rep: Report):
    from .bessel import random_bessel_like
    from .gamma_gl1 import gamma_closed, gamma_fe, invariance_check, normalized_zeta
    tol = cfg.tol or 1e-7
    q = cfg.q
    B = random_bessel_like(q, cfg.seed)
    z = normalized_zeta(B)
    rep.add("Z(B, delta_0, f_0) = 1", "normalized GL1 zeta sum", 1.0, z, abs(z - 1) <= tol)
    chis = range(q - 1) if cfg.chi is None else [cfg.chi % (q - 1)]
    for j in chis:
        a, b = gamma_fe(B, j), gamma_closed(B, j)
        rep.add(f"gamma(B x chi_{j}): functional equation vs closed form", "GL1 gamma factor",
                b.value, a.value, abs(a.value - b.value) <= tol)
    n = q ** 6 * (q * q - 1)
    if n <= cfg.budget:
        for j in chis:
            r, dt = _timed(invariance_check, B, j, 100, cfg.seed)
            rep.add(f"J-invariance of the zeta sum, chi_{j}", "invariance of the GL1 zeta sum",
                    0.0, r["max_error"], r["max_error"] <= tol, dt)


def suite_gamma_gl2(cfg: RunConfig, rep: Report):
    from .bessel import random_bessel_like
    from .gamma_gl2 import (bessel_on_cosets, collapsed_Psi, parabolic_census, w2_cell_check,
                            gamma_gl2, intertwined_section_check, psrs_Psi, representative_taus, sections)
    from .smallrep import find_irrep
    _need_q3(cfg)
    q = cfg.q
    tol = cfg.tol or 1e-7
    try:
        taus = [find_irrep(q, cfg.tau)] if cfg.tau else representative_taus(q)
    except KeyError:
        raise click.UsageError(f"unknown tau {cfg.tau!r}")
    for rep_ in taus:
        for sec in sections(q, rep_):
            r, dt = _timed(intertwined_section_check, sec, extension="H-full")
            rep.add(f"intertwined section on P w2 P, {sec.label}", "intertwined section support",
                    {"max_offdiag": 0.0, "max_value_error": 0.0},
                    {"max_offdiag": r["max_offdiag"], "max_value_error": r["max_value_error"]},
                    r["ok"], dt)
    B = random_bessel_like(q, cfg.seed, support_mask=("ababa", "ababab"), normalized=False)
    sup = bessel_on_cosets(B)
    for rep_ in taus:
        for sec in sections(q, rep_):
            r, dt = _timed(w2_cell_check, B, sec, rtol=tol, support=sup)
            rep.add(f"Psi(B, M f) = q^3 sum B(m w2) W*(m), {sec.label}", "w2-cell zeta sum",
                    r["rhs"], r["lhs"], r["ok"], dt)
    r, dt = _timed(parabolic_census, q)
    rep.add("four parabolic double cosets", "P double coset decomposition",
            r["by_cells"], r["by_orbits"], r["ok"], dt)
    Bfull = random_bessel_like(q, cfg.seed)
    supf = bessel_on_cosets(Bfull)
    for rep_ in taus:
        sec = sections(q, rep_)[0]
        a, b = psrs_Psi(Bfull, sec, support=supf), collapsed_Psi(Bfull, sec)
        rep.add(f"zeta sum collapses to GL2, {sec.label}", "collapse of the zeta sum to M",
                b, a, abs(a - b) <= tol * max(1.0, abs(b)))
        g = gamma_gl2(Bfull, rep_, all_vectors=True)
        vals = [v for _, v in g.per_vector]
        spread = max(abs(v - vals[0]) for v in vals)
        rep.add(f"gamma(B x {rep_.label}) per vector", "GL2 gamma factor",
                None, g.row()["per_vector"], True)
        rep.add(f"gamma spread over vectors, {rep_.label} (diagnostic)", "GL2 gamma factor",
                None, spread, True)


def suite_converse(cfg: RunConfig, rep: Report):
    from .converse import converse_pipeline, density_check, m_in_small_cells
    _need_q3(cfg)
    for t in (1, 2):
        r = density_check(t, cfg.q)
        rep.add(f"density, GL{t}", "density of Whittaker functions", r["admissible"],
                r["rank"], r["ok"])
    r = m_in_small_cells(cfg.q)
    rep.add("M inside B and B s_b B", "Levi in small cells", ["", "b"], r["cells"], r["ok"])
    seed_b = cfg.seed + 1 if cfg.seed_b is None else cfg.seed_b
    r, dt = _timed(converse_pipeline, cfg.seed, seed_b, cfg.q, cfg.cuspidal)
    same = cfg.seed == seed_b
    rep.add(f"converse verdict, seeds {cfg.seed} vs {seed_b}", "converse theorem",
            {"equal": same}, {"verdict": r["verdict"], "witness": r["witness"],
                              "cell_diff": r["cell_diff"], "gamma_difference": r["gamma_difference"]},
            r["sound"], dt)


RUNNERS = {"chevalley": suite_chevalley, "weil": suite_weil, "classes": suite_classes,
           "gauss": suite_gauss, "pairings": suite_pairings, "gamma-gl1": suite_gamma_gl1,
           "gamma-gl2": suite_gamma_gl2, "converse": suite_converse}


def validate(cfg: RunConfig):
    from .ff import prime_power
    try:
        p, _ = prime_power(cfg.q)
    except ValueError:
        raise click.UsageError(f"q = {cfg.q} is not a prime power")
    if p == 2:
        raise click.UsageError("q must be odd")
    if cfg.suite != "all" and cfg.suite not in RUNNERS:
        raise click.UsageError(f"unknown suite {cfg.suite!r}")
    if cfg.chi is not None and not 0 <= cfg.chi < cfg.q - 1:
        raise click.UsageError(f"chi must be in 0..{cfg.q - 2}")


def run(cfg: RunConfig) -> Report:
    validate(cfg)
    rep = Report(cfg.echo(), timings=cfg.timings)
    names = [s for s in SUITES if cfg.q == 3 or s not in ("gamma-gl2", "converse")] \
        if cfg.suite == "all" else [cfg.suite]
    for name in names:
        RUNNERS[name](cfg, rep)
    return rep


def emit(cfg: RunConfig, rep: Report):
    text = dumps(rep)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    s = rep.as_dict()["summary"]
    click.echo(f"{cfg.suite} q={cfg.q}: {s['passed']} passed, {s['failed']} failed, "
               f"{s['skipped']} skipped", err=True)
    sys.exit(1 if rep.failed else 0)


# -- click wiring ------------------------------------------------------------

def _options(fn):
    opts = [
        click.option("--q", "q", type=int, required=True, help="field order (odd prime power)"),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--chi", type=int, default=None, help="restrict to chi_j"),
        click.option("--tau", default=None, help="GL2 irrep label, e.g. cusp:1"),
        click.option("--tol", type=float, default=None, help="tolerance override"),
        click.option("--out", "--report", "out", default=None, help="write JSON here"),
        click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True,
                     help="largest element count a suite may enumerate"),
        click.option("--timings", is_flag=True, help="add runtimes (reports stop being byte-stable)"),
    ]
    for o in reversed(opts):
        fn = o(fn)
    return fn


@click.group()
def main():
    """Verification suites for G2(F_q) computations."""


@main.command("run")
@click.option("--suite", required=True, type=click.Choice(SUITES + ("all",)))
@click.option("--seedB", "seed_b", type=int, default=None)
@click.option("--cuspidal", is_flag=True)
@_options
def run_cmd(suite, seed_b, cuspidal, **kw):
    """Run one suite, or all of them."""
    cfg = RunConfig(suite=suite, seed_b=seed_b, cuspidal=cuspidal, **kw)
    emit(cfg, run(cfg))


def _suite_command(name):
    @_options
    def cmd(**kw):
        cfg = RunConfig(suite=name, **kw)
        emit(cfg, run(cfg))
    cmd.__doc__ = f"Run the {name} suite."
    return main.command(name)(cmd)


for _name in SUITES:
    if _name != "converse":
        _suite_command(_name)


@main.command("converse")
@click.option("--seedA", "seed_a", type=int, default=None)
@click.option("--seedB", "seed_b", type=int, default=None)
@click.option("--cuspidal", is_flag=True, help="also check the left-side vanishing")
@_options
def converse_cmd(seed_a, seed_b, cuspidal, seed, **kw):
    """Compare two mock Bessel functions through their gamma data."""
    cfg = RunConfig(suite="converse", seed=seed if seed_a is None else seed_a,
                    seed_b=seed_b, cuspidal=cuspidal, **kw)
    emit(cfg, run(cfg))


if __name__ == "__main__":
    main()
