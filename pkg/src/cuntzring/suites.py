"""Suite registry: named batches of checks over the configured corpus.

Each record has a verdict: 'pass', 'fail' (a conclusive violation of a
proved statement, with replayable evidence) or 'unknown' (a bounded search
ran out before deciding).  Classification outcomes such as "this ring is not
dense" are values of passing records, not failures.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import chains as ch
from . import cu
from .classes import Status, is_dense, is_left_normal, is_weakly_s_unital
from .config import SUITES, WorkbenchConfig
from .errors import (AxiomViolation, BudgetExceeded, CofinalityFailed, CrossValidationError,
                     HypothesisFailed, InterpolantNotFound, NotAChain, NotInS, NotWeaklySUnital,
                     SearchExhausted, TailInadmissible, WorkbenchError)
from .ideals import (check_retract, decomposable_span, enumerate_ideals, find_trace_idempotent,
                     ideal_sum, is_decomposable, is_idempotent, is_pure, is_quasipure, trace_ideal)
from .matrices import Budget, RingMatrix, subordinate
from .quotients import (block_lift, check_block_stages, decomposable_ideals, simulate_block_inputs,
                        transfer_report)

DESCRIPTIONS = {
    "ideal-classes": "decomposable / quasipure / pure classification of every ideal, criterion against oracle; trace idempotents",
    "thm-retract": "Lat_qp is a retract of Lat_d: psi(phi(I)) = I and phi(psi(I)) <= I, meets and joins",
    "lemma-lift": "pi(x) below pi(y) lifts to x below y (+) z with z over I",
    "block-lift": "forward-simulated block-lift inputs satisfy Y_{n+1} X_{n+1} X_n = X_n",
    "ring-classes": "weakly s-unital, dense and left normal checkers",
    "chain-ops": "chain relations, sums and suprema with replayed witnesses",
    "qp-chains": "quasipure chains through every element of every quasipure ideal",
    "s-closure": "suprema of increasing families in S(R) via the twisted chain",
    "dense-interp": "prec-increasing interpolating chains with the given supremum",
    "intervals": "interval semigroups, compacts isomorphisms and truncated W(R)",
    "cu-limits": "Cu axioms, seeded mutants, Cu quotients, PoM colimits and Cu limits",
    "sq-pairs": "SQ pair validation, cofinality, quotients and exactness",
}


@dataclass
class SuiteResult:
    suite: str
    records: list = field(default_factory=list)

    @property
    def summary(self) -> dict:
        out = {"pass": 0, "fail": 0, "unknown": 0}
        for r in self.records:
            out[r["verdict"]] += 1
        return out

    def to_json(self):
        return {"suite": self.suite, "summary": self.summary, "records": self.records}


def record(subject, check, verdict, value=None, witness=None) -> dict:
    return {"subject": subject, "check": check, "verdict": verdict, "value": value, "witness": witness}


def _m(x: RingMatrix):
    return x.to_json()


@dataclass
class Context:
    cfg: WorkbenchConfig
    rng_seed: int

    @property
    def rings(self):
        return [(n, self.cfg.built_rings[n]) for n in self.cfg.rings]

    @property
    def B(self):
        return self.cfg.bounds["matrix_size"]

    @property
    def budget(self):
        return self.cfg.bounds["budget"]

    def rng(self, *salt):
        return np.random.default_rng([self.rng_seed, *[hash_str(s) for s in salt]])


def hash_str(s) -> int:
    """A stable (process-independent) small hash for seeding."""
    h = 0
    for c in str(s):
        h = (h * 131 + ord(c)) % (1 << 31)
    return h


# ---------------------------------------------------------------- ring-side suites

def _ideal_classes(ctx: Context, name, R):
    out = []
    orc = {"n_max": ctx.cfg.bounds["oracle_size"], "seed": ctx.rng_seed}
    ideals = enumerate_ideals(R)
    for I in ideals:
        subj = f"{name}:{I.name() if len(I) <= 8 else '|I|=' + str(len(I))}"
        try:
            d = is_decomposable(I, "both", **orc)
            q = is_quasipure(I, "all", **orc)
        except CrossValidationError as e:
            out.append(record(subj, "classification", "fail", str(e),
                              {"kind": "ideal", "ring": R.meta, "ideal": list(I.elements)}))
            continue
        value = {"decomposable": d.value, "decomposable_oracle": d.evidence["oracle_value"],
                 "quasipure": q.value, "quasipure_modes": q.evidence["values"],
                 "pure": is_pure(I), "idempotent": is_idempotent(I)}
        verdict, wit = "pass", None
        if not d.value:
            wit = {"kind": "span", "ring": R.meta, "ideal": list(I.elements),
                   "span_RIR": list(decomposable_span(I))}
            if R.unit is not None:
                verdict = "fail"    # every ideal of a unital ring is decomposable
        out.append(record(subj, "classification", verdict, value, wit))
        if R.unit is not None and q.value:
            e, status = find_trace_idempotent(I)
            if e is None:
                out.append(record(subj, "trace-idempotent", "unknown", status))
                continue
            T = trace_ideal(e)
            ok = T == I and bool(is_quasipure(T).value)
            out.append(record(subj, "trace-idempotent", "pass" if ok else "fail", {"size": e.rows},
                              {"kind": "trace", "ring": R.meta, "ideal": list(I.elements), "e": _m(e)}))
    return out


def _thm_retract(ctx, name, R):
    rep = check_retract(R)
    value = {"lattice_sizes": list(rep.lattice_sizes),
             "psi": {",".join(map(str, a)): list(b) for a, b in rep.psi.items()}}
    wit = None if rep.ok else {"kind": "retract", "ring": R.meta,
                               "violations": {k: v[:3] for k, v in rep.checks.items() if v}}
    return [record(name, "retract", "pass" if rep.ok else "fail", value, wit)]


def _lemma_lift(ctx, name, R):
    if R.size > 16:
        return []
    out = []
    for I in decomposable_ideals(R):
        rep = transfer_report(R, I, samples=ctx.cfg.bounds["samples"], seed=ctx.rng_seed,
                              budget=min(ctx.budget, 10**7))
        value = dict(rep.counts, screening_inconclusive=rep.inconclusive)
        if rep.violations:
            v = rep.violations[0]
            wit = dict(v, kind="lift", ring=R.meta, ideal=list(I.elements))
            out.append(record(f"{name}:{I.name()}", "lift", "fail", value, wit))
        elif rep.counts["lift_inconclusive"]:
            out.append(record(f"{name}:{I.name()}", "lift", "unknown", value))
        else:
            out.append(record(f"{name}:{I.name()}", "lift", "pass", value))
    return out


def _block_lift(ctx, name, R):
    if R.unit is None or R.size > 16:
        return []
    out = []
    n = ctx.cfg.bounds["block_samples"]
    for I in enumerate_ideals(R):
        if len(I) in (1, R.size) or not is_idempotent(I):
            continue
        rng = ctx.rng("block", name, I.elements)
        ok, bad = 0, None
        try:
            for _ in range(n):
                stages, chains = simulate_block_inputs(R, I, 3, rng, max_tries=20_000)
                lifted = block_lift(stages, chains)
                if check_block_stages(lifted):
                    ok += 1
                elif bad is None:
                    bad = {"kind": "block", "ring": R.meta, "lifted": [st.to_json() for st in lifted]}
        except HypothesisFailed as e:
            out.append(record(f"{name}:{I.name()}", "block-identity", "unknown", {"verified": ok, "note": str(e)}))
            continue
        out.append(record(f"{name}:{I.name()}", "block-identity", "fail" if bad else "pass",
                          {"simulations": n, "verified": ok, "stages": 3}, bad))
    return out


def _ring_classes(ctx, name, R):
    B, out = ctx.B, []
    v = is_weakly_s_unital(R, B, seed=ctx.rng_seed)
    wit = None
    if v.status == Status.FAILS:
        wit = {"kind": "not_weakly_s_unital", "ring": R.meta, "x": _m(v.counterexample[0])}
    bad = R.unit is not None and v.status != Status.HOLDS
    out.append(record(name, "weakly-s-unital", "fail" if bad else "pass", v.status.value, wit))
    v = is_dense(R, B, seed=ctx.rng_seed)
    wit = None
    if v.status == Status.FAILS:
        x, y = v.counterexample
        w = subordinate(x, y)
        wit = {"kind": "non_dense", "ring": R.meta, "x": _m(x), "y": _m(y), "s": _m(w.left),
               "t": _m(w.right), "bound": B + 1}
    bad = R.unit is not None and v.status != Status.HOLDS
    out.append(record(name, "dense", "fail" if bad else "pass", v.status.value, wit))
    v = is_left_normal(R, B, seed=ctx.rng_seed)
    wit = None
    if v.status == Status.FAILS:
        wit = {"kind": "not_left_normal", "ring": R.meta, **{k: _m(m) for k, m in zip("abc", v.counterexample)}}
    out.append(record(name, "left-normal", "pass", {"status": v.status.value, "bound": v.bound}, wit))
    return out


def _random_chain(R, rng, length, n=None):
    """x_k = s x_{k+1} t from a random top; None when the top is not below itself."""
    n = n or int(rng.integers(1, 3))
    rnd = lambda: RingMatrix.from_array(R, rng.integers(0, R.size, size=(n, n)))
    terms = [rnd() @ rnd() @ rnd()]
    for _ in range(length - 1):
        terms.insert(0, rnd() @ terms[0] @ rnd())
    try:
        return ch.make_chain(terms, ring=R)
    except TailInadmissible:
        return None


def _chain_ops(ctx, name, R):
    if R.size > 8:
        return []
    rng = ctx.rng("chains", name)
    cs = [ch.zero_chain(R)]
    for k in range(40):
        if len(cs) == 7:
            break
        c = _random_chain(R, rng, int(rng.integers(1, 4)), 1 if k % 2 else 2)
        if c is not None:
            cs.append(c)
    counts = {"relations": 0, "held": 0, "sums": 0, "sups": 0, "unknown": 0}
    fail = lambda kind, **kw: [record(name, "chain-relations", "fail", counts,
                                      {"kind": kind, "ring": R.meta, **kw})]
    for a in cs:
        for b in cs:
            try:
                for rel in ("le", "prec", "equiv"):
                    v = ch.chain_rel(a, b, rel, Budget(ctx.budget))
                    counts["relations"] += 1
                    if v.holds:
                        counts["held"] += 1
                        if not v.replay(a, b):
                            return fail("chain_rel", rel=rel, a=a.to_json(), b=b.to_json())
                if a.dim + b.dim > 2:
                    continue
                s = ch.chain_add(a, b)
                if not (ch.chain_le(a, s, Budget(ctx.budget)) and ch.chain_le(b, s, Budget(ctx.budget))):
                    return fail("chain_add", a=a.to_json(), b=b.to_json())
                counts["sums"] += 1
                sup = ch.chain_sup([a, s], budget=Budget(ctx.budget))
                if not ch.chain_equiv(sup, s, Budget(ctx.budget)):
                    return fail("chain_sup", a=a.to_json(), b=b.to_json())
                counts["sups"] += 1
            except BudgetExceeded:
                counts["unknown"] += 1
    return [record(name, "chain-relations", "unknown" if counts["unknown"] else "pass", counts)]


def _qp_elements(R):
    for I in enumerate_ideals(R):
        if len(I) > 1 and is_idempotent(I):
            yield I


def _qp_chains(ctx, name, R):
    out = []
    for I in _qp_elements(R):
        counts, bad, unknown = 0, None, 0
        for e in I.elements:
            x = RingMatrix.from_array(R, [[e]])
            try:
                c = ch.quasipure_chain(I, x, budget=ctx.budget)
            except (SearchExhausted, BudgetExceeded):
                unknown += 1
                continue
            st = ch.s_stability(c, I)
            if not (ch.anchor_verifies(c) and ch.check_s_witnesses(c) and st["consistent"]):
                bad = bad or {"kind": "qp_chain", "ring": R.meta, "ideal": list(I.elements), "x": _m(x)}
            counts += 1
        verdict = "fail" if bad else ("unknown" if unknown else "pass")
        out.append(record(f"{name}:{I.name() if len(I) <= 8 else '|I|=' + str(len(I))}", "qp-chain",
                          verdict, {"elements": counts, "unknown": unknown}, bad))
    return out


def _qp_sample(ctx, name, R, limit=3):
    """Up to `limit` quasipure chains of nonzero 1x1 elements, with their ideals."""
    got = []
    for I in _qp_elements(R):
        for e in I.elements:
            if e == R.zero or len(got) >= limit:
                continue
            try:
                got.append((I, ch.quasipure_chain(I, RingMatrix.from_array(R, [[e]]), budget=ctx.budget)))
            except (SearchExhausted, BudgetExceeded):
                pass
    return got


def _s_closure(ctx, name, R):
    if R.size > 16:
        return []
    out = []
    sample = _qp_sample(ctx, name, R)
    for i, (I, a) in enumerate(sample):
        for J, b in sample[i:]:
            ab = ch.chain_add(a, b)
            K = ideal_sum(I, J)
            for fam, label in (([a, ab], "a<=a+b"), ([ch.zero_chain(R), a, ab], "0<=a<=a+b"), ([a, a], "constant")):
                subj = f"{name}:{label}"
                try:
                    t = ch.s_closure_check(fam, budget=ctx.budget)
                    st = ch.s_stability(t, K)
                except BudgetExceeded:
                    out.append(record(subj, "s-closure", "unknown"))
                    continue
                except (HypothesisFailed, NotAChain, NotInS, TailInadmissible) as e:
                    out.append(record(subj, "s-closure", "fail", str(e),
                                      {"kind": "s_closure", "ring": R.meta, "family": [c.to_json() for c in fam]}))
                    continue
                ok = st["consistent"]
                out.append(record(subj, "s-closure", "pass" if ok else "fail",
                                  {"terms": len(t.terms), "stability": st["consistent"]}))
    return out


def _dense_interp(ctx, name, R):
    if R.size > 16:
        return []
    out = []
    for I, c in _qp_sample(ctx, name, R):
        for mode in ("dense", "normal"):
            if mode == "normal" and not ch.is_normalized(c):
                continue
            subj = f"{name}:{I.name() if len(I) <= 8 else '|I|=' + str(len(I))}:{mode}"
            try:
                zs = ch.interpolate_dense(c, mode, budget=ctx.budget)
                out.append(record(subj, "interpolation", "pass", {"chains": len(zs)}))
            except (InterpolantNotFound, BudgetExceeded) as e:
                out.append(record(subj, "interpolation", "unknown", str(e)))
            except HypothesisFailed as e:
                out.append(record(subj, "interpolation", "fail", str(e),
                                  {"kind": "interpolation", "ring": R.meta, "chain": c.to_json(), "mode": mode}))
    return out


# ---------------------------------------------------------------- abstract suites

def _intervals(ctx):
    out = []
    for T, k in ((10, 1), (5, 2)):
        ok = cu.nat_interval_check(k, T)
        out.append(record(f"nat^{k}", "interval-representation", "pass" if ok else "fail", {"truncation": T}))
    for name, M in ctx.cfg.built_poms.items():
        ls = cu.lambda_sigma(M)
        ok = ls.check_compacts_iso()
        for f in M.factors:
            if f is not cu.NAT:
                ok = ok and set(cu.intervals(f)) == {cu.principal(f, x) for x in range(f.size)}
        out.append(record(name, "compacts-isomorphism", "pass" if ok else "fail",
                          {"structure": ls.structure.name}))
    for name, R in ctx.rings:
        if R.size > 8:
            continue
        try:
            W = cu.truncated_W(R, 2, budget=ctx.budget)
        except (NotWeaklySUnital, BudgetExceeded):
            continue
        out.append(record(name, "truncated-W", "pass", {"classes": len(W.classes), "match": W.match}))
    return out


def _systems(ctx):
    out = []
    for name, (pom, f) in ctx.cfg.systems.items():
        P = ctx.cfg.built_poms[pom].factors[0]
        try:
            out.append((name, cu.endo_chain(P, f)))
        except AxiomViolation:
            out.append((name, None))
    return out


def _cu_limits(ctx):
    out = []
    for name, M in ctx.cfg.built_poms.items():
        S = cu.cu_of(M)
        if sum(f is cu.NAT for f in S.factors) > 3:
            continue
        rep = cu.check_cu_axioms(S)
        out.append(record(name, "cu-axioms", "pass" if rep.ok else "fail", {"failed": rep.failed()},
                          None if rep.ok else {"kind": "cu_axioms", **rep.to_json()}))
    base = cu.CuStructure([cu.NAT])
    killed = [m.name for m in cu.seeded_mutants(base) if not cu.check_cu_axioms(m).ok]
    out.append(record("nat+inf", "mutants", "pass" if len(killed) == 5 else "fail", {"killed": killed}))
    q = cu.cu_ideal_ops(cu.CuStructure([cu.NAT, cu.NAT]), "quotient", {1})
    out.append(record("(nat+inf)^2/(0 x nat+inf)", "cu-quotient", "pass" if q.report.ok else "fail",
                      {"classes_on_grid": len(q.classes), "target": q.structure.name}))
    rng = ctx.rng("cocones")
    for name, sys in _systems(ctx):
        if sys is None:
            out.append(record(name, "pom-colimit", "fail", "map is not a PoM morphism"))
            continue
        col = cu.pom_colimit(sys)
        lim = cu.check_cu_limit(sys, col.pom, col.maps, col.window)
        cont = cu.check_continuity(sys)
        univ = cu.random_cocone_check(sys, col, rng)
        big, bm = cu.enlarged_candidate(col)
        wrong = cu.check_cu_limit(sys, big, bm, col.window)
        ok = lim.ok and cont.ok and univ and not wrong.conditions["c"]["ok"]
        out.append(record(name, "cu-limit", "pass" if ok else "fail",
                          {"colimit": col.pom.labels, "limit": lim.ok, "continuity": cont.ok,
                           "cocones": univ, "wrong_candidate_c": wrong.conditions["c"]["witness"]}))
    return out


def _sq_pairs(ctx):
    out = []
    for name, M in ctx.cfg.built_poms.items():
        if len(M.factors) != 1 or M.factors[0] is cu.NAT:
            continue
        P = M.factors[0]
        Ws = sorted({frozenset(range(P.size))} | {_generated(P, g) for g in range(P.size)},
                    key=lambda w: (len(w), sorted(w)))
        counts = {"pairs": 0, "cofinal": 0, "refused": 0}
        bad = None
        for W in Ws:
            pair = cu.SQPairFin(P, W)
            if not cu.sq_pair_ops(pair).ok:
                bad = bad or {"kind": "sq", "pom": name, "W": sorted(W)}
                continue
            for I in cu.cu_ideals_finite(P):
                counts["pairs"] += 1
                if cu.sq_pair_ops(pair, "cofinal", I).ok:
                    counts["cofinal"] += 1
                    if not all(cu.sq_pair_ops(pair, w, I).ok for w in ("ideal", "quotient", "exact")):
                        bad = bad or {"kind": "sq", "pom": name, "W": sorted(W), "I": sorted(I)}
                else:
                    try:
                        cu.sq_pair_ops(pair, "quotient", I)
                        bad = bad or {"kind": "sq", "pom": name, "W": sorted(W), "I": sorted(I)}
                    except CofinalityFailed:
                        counts["refused"] += 1
        out.append(record(name, "sq-pairs", "fail" if bad else "pass", counts, bad))
    return out


def _generated(P, g):
    S, frontier = {P.zero, g}, [g]
    while frontier:
        x = frontier.pop()
        for y in list(S):
            z = int(P.add[x, y])
            if z not in S:
                S.add(z)
                frontier.append(z)
    return frozenset(S)


PER_RING = {"ideal-classes": _ideal_classes, "thm-retract": _thm_retract, "lemma-lift": _lemma_lift,
            "block-lift": _block_lift, "ring-classes": _ring_classes, "chain-ops": _chain_ops,
            "qp-chains": _qp_chains, "s-closure": _s_closure, "dense-interp": _dense_interp}
GLOBAL = {"intervals": _intervals, "cu-limits": _cu_limits, "sq-pairs": _sq_pairs}
assert set(PER_RING) | set(GLOBAL) == set(SUITES)


def run_suite(cfg: WorkbenchConfig, suite: str, timings: bool = False) -> SuiteResult:
    """Run every check of one suite over the corpus, in corpus order."""
    from .errors import UnknownSuite
    if suite not in SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}")
    ctx = Context(cfg, cfg.seed)

    def timed(fn, *args):
        t = time.perf_counter()
        try:
            recs = fn(ctx, *args)
        except BudgetExceeded as e:
            recs = [record(args[0] if args else suite, suite, "unknown", f"budget: {e}")]
        except WorkbenchError as e:
            recs = [record(args[0] if args else suite, suite, "fail", f"{type(e).__name__}: {e}")]
        if timings:
            dt = round(time.perf_counter() - t, 3)
            for r in recs:
                r["elapsed"] = dt
        return recs

    if suite in GLOBAL:
        return SuiteResult(suite, timed(GLOBAL[suite]))
    fn = PER_RING[suite]
    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
        parts = list(pool.map(lambda nr: timed(fn, *nr), ctx.rings))
    return SuiteResult(suite, [r for part in parts for r in part])


def run_all(cfg: WorkbenchConfig, suites=None, timings: bool = False) -> list[SuiteResult]:
    return [run_suite(cfg, s, timings) for s in (suites or cfg.suites)]
