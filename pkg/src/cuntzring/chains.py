"""Finite representatives of increasing matrix sequences.

A ChainSequence stores finitely many terms x_1..x_N and stands for the
infinite sequence that repeats x_N forever (the RepeatLast tail).  All terms
are padded to one square size so products between terms are defined.

An S-certificate is a list of matrices y with x_n = y_{n+1} x_{n+1} x_n for
every n; the last entry covers the tail, x_N = y x_N x_N.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .classes import find_interpolant, matrix_space, normal_chain
from .errors import (BudgetExceeded, HypothesisFailed, InterpolantNotFound, NotAChain,
                     NotIncreasing, NotInS, RingMismatch, SearchExhausted, TailInadmissible,
                     WitnessNotFound)
from .ideals import Ideal, fixing_matrix
from .matrices import (Budget, RingMatrix, SubordinationWitness, direct_sum, subordinate,
                       sum_witness)
from .rings import FiniteRing

REPEAT_LAST = "RepeatLast"
SPAN_LIMIT = 1 << 18


@dataclass
class ChainSequence:
    ring: FiniteRing = field(repr=False)
    terms: list
    tail: str = REPEAT_LAST
    s_witnesses: list | None = None
    links: list | None = None
    notes: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.terms)

    @property
    def dim(self) -> int:
        return self.terms[0].rows

    @property
    def last(self) -> RingMatrix:
        return self.terms[-1]

    def term(self, n: int) -> RingMatrix:
        """n-th term of the infinite sequence (0-based)."""
        return self.terms[min(n, len(self.terms) - 1)]

    def witness(self, n: int) -> RingMatrix:
        return self.s_witnesses[min(n, len(self.terms) - 1)]

    def to_json(self):
        out = {"tail": self.tail, "terms": [t.to_json() for t in self.terms]}
        if self.s_witnesses is not None:
            out["s_witnesses"] = [y.to_json() for y in self.s_witnesses]
        if self.links is not None:
            out["links"] = [w.to_json() for w in self.links]
        return out


@dataclass
class ChainRelationVerdict:
    rel: str
    holds: bool
    witness_map: dict
    failing_index: int | None = None

    def replay(self, a: ChainSequence, b: ChainSequence) -> bool:
        """Re-verify every stored witness by multiplication."""
        if not self.holds:
            return True
        maps = self.witness_map if self.rel == "equiv" else {"forward": self.witness_map}
        for direction, m in maps.items():
            src, dst = (a, b) if direction == "forward" else (b, a)
            for i, (j, w) in m.items():
                if not w.verify(src.terms[i], dst.term(j)):
                    return False
        return True

    def to_json(self):
        def dump(m):
            return {str(i): {"target": j, "witness": w.to_json()} for i, (j, w) in m.items()}
        maps = self.witness_map if self.rel == "equiv" else {"forward": self.witness_map}
        return {"rel": self.rel, "holds": self.holds, "failing_index": self.failing_index,
                "witnesses": {k: dump(v) for k, v in maps.items()}}


# ---------------------------------------------------------------- helpers

def _uniform(terms) -> list[RingMatrix]:
    D = max(max(t.rows, t.cols) for t in terms)
    return [t.padded(D, D) if t.shape != (D, D) else t for t in terms]


def _same_ring(*chains):
    R = chains[0].ring
    for c in chains[1:]:
        if not c.ring.same_as(R):
            raise RingMismatch(f"{c.ring.meta} vs {R.meta}")
    return R


def left_span(R: FiniteRing, M: np.ndarray, scalars) -> dict:
    """All rows sum_j c_j M[j] with c_j drawn from `scalars`.

    Maps each reachable row (as a tuple) to one coefficient vector producing
    it.  `scalars` must be closed under addition (R itself or an ideal).
    """
    k, p = M.shape
    zero_row = (R.zero,) * p
    gens = []
    for j in range(k):
        for c in scalars:
            row = tuple(int(v) for v in R.mul[c, M[j]])
            if row != zero_row:
                coef = np.full(k, R.zero, dtype=np.int64)
                coef[j] = c
                gens.append((np.asarray(row), coef))
    seen = {zero_row: np.full(k, R.zero, dtype=np.int64)}
    frontier = [zero_row]
    while frontier:
        nxt = []
        for row in frontier:
            base, coef = np.asarray(row), seen[row]
            for g, gc in gens:
                new = tuple(int(v) for v in R.add[base, g])
                if new not in seen:
                    seen[new] = R.add[coef, gc].astype(np.int64)
                    nxt.append(new)
        if len(seen) > SPAN_LIMIT:
            raise BudgetExceeded("row span too large")
        frontier = nxt
    return seen


def solve_left(R: FiniteRing, X: RingMatrix, M: RingMatrix, scalars=None) -> RingMatrix | None:
    """y with y M = X, entries of y taken from `scalars` (default: all of R)."""
    scalars = range(R.size) if scalars is None else scalars
    span = left_span(R, M.array, scalars)
    rows = []
    for row in X.array:
        c = span.get(tuple(int(v) for v in row))
        if c is None:
            return None
        rows.append(c)
    return RingMatrix.from_array(R, np.stack(rows))


# ---------------------------------------------------------------- construction

def make_chain(terms, tail: str = REPEAT_LAST, ring: FiniteRing | None = None, budget=None) -> ChainSequence:
    """Validate consecutive subordination and the RepeatLast tail."""
    if tail != REPEAT_LAST:
        raise TailInadmissible(f"tail mode {tail!r} is not supported")
    terms = list(terms)
    if not terms:
        raise NotAChain("a chain needs at least one term", index=0)
    R = ring or terms[0].ring
    for t in terms:
        if not t.ring.same_as(R):
            raise RingMismatch(f"term over {t.ring.meta}, chain over {R.meta}")
    terms = _uniform(terms)
    budget = budget if isinstance(budget, Budget) else Budget(budget or 10**8)
    links = []
    for n in range(len(terms) - 1):
        w = subordinate(terms[n], terms[n + 1], budget)
        if w is None:
            raise NotAChain(f"term {n} is not subordinate to term {n + 1}", index=n)
        links.append(w)
    w = subordinate(terms[-1], terms[-1], budget)
    if w is None:
        raise TailInadmissible(f"last term {terms[-1]} is not subordinate to itself")
    links.append(w)
    return ChainSequence(R, terms, tail, None, links)


def constant_chain(x: RingMatrix, length: int = 1) -> ChainSequence:
    return make_chain([x] * length)


def zero_chain(R: FiniteRing, dim: int = 1) -> ChainSequence:
    z = RingMatrix.zeros(R, dim, dim)
    return ChainSequence(R, [z], REPEAT_LAST, [z], [SubordinationWitness(z, z)])


def check_s_witnesses(c: ChainSequence) -> bool:
    """x_n = y_{n+1} x_{n+1} x_n for all n, tail included."""
    if c.s_witnesses is None or len(c.s_witnesses) != len(c.terms):
        return False
    for n in range(len(c.terms)):
        x, nxt, y = c.terms[n], c.term(n + 1), c.s_witnesses[n]
        if not (y @ nxt @ x).same_element(x):
            return False
    return True


def certify_s_membership(c: ChainSequence, within: Ideal | None = None) -> ChainSequence:
    """Attach witnesses y with x_n = y x_{n+1} x_n, solved row by row.

    With `within`, the entries of y are restricted to that ideal.  The row
    solve is exhaustive, so NotInS is a definite answer.
    """
    R = c.ring
    scalars = None if within is None else list(within.elements)
    ys = []
    for n in range(len(c.terms)):
        x, nxt = c.terms[n], c.term(n + 1)
        y = solve_left(R, x, nxt @ x, scalars)
        if y is None:
            where = "the tail" if n == len(c.terms) - 1 else f"index {n}"
            raise NotInS(f"x = y.x'.x has no solution at {where}", index=n)
        ys.append(y)
    out = replace(c, s_witnesses=ys)
    assert check_s_witnesses(out)
    return out


def rewitness_in_ideal(c: ChainSequence, I: Ideal) -> ChainSequence:
    """Move S-witnesses into M(I) via y'_{n+1} = y_{n+1} y_{n+2} x_{n+2}.

    Needs every term over I; the new witnesses are then over I as well.
    """
    if c.s_witnesses is None:
        raise NotInS("chain carries no S-witnesses", index=0)
    for t in c.terms:
        if not t.entries_in(I.elements):
            raise HypothesisFailed(f"term {t} is not over {I.name()}")
    ys = [c.witness(n) @ c.witness(n + 1) @ c.term(n + 2) for n in range(len(c.terms))]
    out = replace(c, s_witnesses=ys)
    if not check_s_witnesses(out) or not all(y.entries_in(I.elements) for y in ys):
        raise NotInS("recombined witnesses do not verify", index=0)
    return out


def s_stability(c: ChainSequence, I: Ideal) -> dict:
    """Certifiability over R versus over I, plus the recombination route."""
    def attempt(within):
        try:
            return certify_s_membership(c, within)
        except NotInS:
            return None
    over_R, over_I = attempt(None), attempt(I)
    recombined = None
    if over_R is not None:
        recombined = rewitness_in_ideal(over_R, I)
    return {"over_R": over_R is not None, "over_I": over_I is not None,
            "recombined": recombined is not None,
            "consistent": (over_R is not None) == (over_I is not None) == (recombined is not None)}


# ---------------------------------------------------------------- relations

def _dominate(a: ChainSequence, b: ChainSequence, budget: Budget):
    """Every term of a below last(b): (holds, witness map, first failure)."""
    wmap = {}
    j = len(b.terms) - 1
    for i, t in enumerate(a.terms):
        w = subordinate(t, b.last, budget)
        if w is None:
            return False, wmap, i
        wmap[i] = (j, w)
    return True, wmap, None


def chain_rel(a: ChainSequence, b: ChainSequence, rel: str = "le", budget=None) -> ChainRelationVerdict:
    """Domination of RepeatLast chains.

    Since b is increasing and subordination is transitive, a is dominated by
    b exactly when each term of a sits below last(b).  The index witnessing
    this is uniform, so 'le' and 'prec' agree on these representatives.
    """
    _same_ring(a, b)
    budget = budget if isinstance(budget, Budget) else Budget(budget or 10**8)
    if rel in ("le", "prec"):
        ok, wmap, bad = _dominate(a, b, budget)
        return ChainRelationVerdict(rel, ok, wmap, bad)
    if rel == "equiv":
        ok1, m1, bad1 = _dominate(a, b, budget)
        if not ok1:
            return ChainRelationVerdict(rel, False, {"forward": m1, "backward": {}}, bad1)
        ok2, m2, bad2 = _dominate(b, a, budget)
        return ChainRelationVerdict(rel, ok2, {"forward": m1, "backward": m2}, bad2)
    raise ValueError(f"unknown relation {rel!r}")


def chain_le(a, b, budget=None) -> bool:
    return chain_rel(a, b, "le", budget).holds


def chain_prec(a, b, budget=None) -> bool:
    return chain_rel(a, b, "prec", budget).holds


def chain_equiv(a, b, budget=None) -> bool:
    return chain_rel(a, b, "equiv", budget).holds


def _aligned(c: ChainSequence, length: int):
    terms = [c.term(n) for n in range(length)]
    ys = None if c.s_witnesses is None else [c.witness(n) for n in range(length)]
    links = None if c.links is None else [c.links[min(n, len(c.links) - 1)] for n in range(length)]
    return terms, ys, links


def chain_add(a: ChainSequence, b: ChainSequence) -> ChainSequence:
    """Componentwise direct sum after repeating last terms to equal length."""
    R = _same_ring(a, b)
    n = max(len(a), len(b))
    ta, ya, la = _aligned(a, n)
    tb, yb, lb = _aligned(b, n)
    terms = [direct_sum(x, y) for x, y in zip(ta, tb)]
    links = None
    if la is not None and lb is not None:
        links = [sum_witness(u, v) for u, v in zip(la, lb)]
    ys = None
    if ya is not None and yb is not None:
        ys = [direct_sum(u, v) for u, v in zip(ya, yb)]
    out = ChainSequence(R, terms, REPEAT_LAST, ys, links)
    if ys is not None and not check_s_witnesses(out):
        raise NotInS("blockwise witnesses failed to verify", index=0)
    return out


def _pad_chain(c: ChainSequence, D: int) -> ChainSequence:
    if c.dim == D:
        return c
    pad = lambda m: m.padded(D, D)
    ys = None if c.s_witnesses is None else [pad(y) for y in c.s_witnesses]
    return ChainSequence(c.ring, [pad(t) for t in c.terms], c.tail, ys, None, dict(c.notes))


def chain_sup(family, upper_bounds=(), budget=None) -> ChainSequence:
    """Supremum of a finite increasing family by diagonal selection.

    For the k-th member the smallest index whose term dominates every term
    already chosen is taken; the result ends with last(c_K).
    """
    if not family:
        raise NotIncreasing("empty family", index=0)
    R = _same_ring(*family)
    budget = budget if isinstance(budget, Budget) else Budget(budget or 10**8)
    for k in range(len(family) - 1):
        if not chain_rel(family[k], family[k + 1], "le", budget).holds:
            raise NotIncreasing(f"member {k} is not below member {k + 1}", index=k)
    D = max(c.dim for c in family)
    family = [_pad_chain(c, D) for c in family]
    chosen = []
    for c in family:
        for j, t in enumerate(c.terms):
            if all(subordinate(s, t, budget) is not None for s in chosen):
                chosen.append(t)
                break
        else:
            raise NotIncreasing("no term dominates the earlier selection")
    chosen.append(family[-1].last)
    out = make_chain(chosen, ring=R, budget=budget)
    for c in family:
        assert chain_rel(c, out, "le", budget).holds
    out.notes["below_bounds"] = [chain_rel(out, u, "le", budget).holds for u in upper_bounds]
    return out


def shifted(c: ChainSequence, by: int = 1) -> ChainSequence:
    k = min(by, len(c.terms) - 1)
    ys = None if c.s_witnesses is None else c.s_witnesses[k:]
    links = None if c.links is None else c.links[k:]
    return ChainSequence(c.ring, c.terms[k:], c.tail, ys, links)


# ---------------------------------------------------------------- quasipure chains

def _idempotent_elements(I: Ideal) -> list[int]:
    R = I.ring
    return [e for e in I.elements if e != R.zero and R.mul[e, e] == e]


def _idempotent_matrices(I: Ideal, D: int):
    space = matrix_space(I.ring, D)
    if space is None:
        return []
    member = np.zeros(I.ring.size, dtype=bool)
    member[list(I.elements)] = True
    idem = space.idempotents
    idem = idem[member[idem].all(axis=(1, 2)) & (idem != I.ring.zero).any(axis=(1, 2))]
    return [RingMatrix.from_array(I.ring, e) for e in idem]


def _express(I: Ideal):
    """Each element of I as sum_a c_a g_a with c_a in I, g the nonzero elements."""
    R = I.ring
    g = np.asarray([e for e in I.elements if e != R.zero], dtype=np.int64)
    span = left_span(R, g[:, None], list(I.elements))
    return g, {k[0]: v for k, v in span.items()}


def _qp_step(I: Ideal, v: RingMatrix):
    """(r, y, s) with v = r y and s y = y, y and s over I, r over R."""
    R = I.ring
    D = v.rows
    for e in _idempotent_elements(I):
        s = RingMatrix.from_array(R, np.diag([e] * D))
        if (s @ v).same_element(v):
            return s, v, s, "fixed-by-idempotent"
    s = fixing_matrix(I, v)
    if s is not None:
        return s, v, s, "fixed"
    for e in _idempotent_matrices(I, D):
        r = solve_left(R, v, e)
        if r is not None:
            return r, e, e, "idempotent"
    # listing construction: y stacks the nonzero elements of I in each column
    g, expr = _express(I)
    m = len(g)
    if any(int(a) not in expr for a in g) or any(int(a) not in expr for a in v.entries):
        raise SearchExhausted(f"{I.name()} is not idempotent; no quasipure data for {v}")
    sbar = np.stack([expr[int(a)] for a in g])
    y = np.full((D * m, D * m), R.zero, dtype=np.int64)
    s = np.full((D * m, D * m), R.zero, dtype=np.int64)
    r = np.full((D * m, D * m), R.zero, dtype=np.int64)
    for j in range(D):
        y[j * m:(j + 1) * m, j] = g
        s[j * m:(j + 1) * m, j * m:(j + 1) * m] = sbar
    for i in range(D):
        for j in range(D):
            r[i, j * m:(j + 1) * m] = expr[v[i, j]]
    return (RingMatrix.from_array(R, r), RingMatrix.from_array(R, y),
            RingMatrix.from_array(R, s), "listing")


def quasipure_chain(I: Ideal, x: RingMatrix, length: int = 3, budget=None) -> ChainSequence:
    """An S(I)-certified chain x_1, x_2, ... with x below x_1.

    Start from x = r x_1 with s_1 x_1 = x_1, then split s_n = y_{n+1} x_{n+1}
    with s_{n+1} x_{n+1} = x_{n+1}; this gives x_n = y_{n+1} x_{n+1} x_n.
    Stops early once a term repeats.
    """
    R = I.ring
    if not x.entries_in(I.elements):
        raise HypothesisFailed(f"{x} is not over {I.name()}")
    x = x.square()
    if x.is_zero():
        c = zero_chain(R, x.rows)
        c.notes["anchor"] = (x, SubordinationWitness(x, x))
        return c
    budget = budget if isinstance(budget, Budget) else Budget(budget or 10**8)
    r, x1, s, how = _qp_step(I, x)
    terms, ys, hows = [x1], [], [how]
    while True:
        y_next, x_next, s_next, how = _qp_step(I, s)
        ys.append(y_next)
        if x_next.same_element(terms[-1]) or len(terms) >= length + 4:
            break
        terms.append(x_next)
        hows.append(how)
        s = s_next
    D = max(max(t.rows for t in terms), max(y.rows for y in ys))
    terms = [t.padded(D, D) for t in terms]
    ys = [y.padded(D, D) for y in ys]
    chain = ChainSequence(R, terms, REPEAT_LAST, ys, None, {"steps": hows})
    if not check_s_witnesses(chain):
        try:
            chain = certify_s_membership(chain, I)
        except NotInS as e:
            raise SearchExhausted(f"quasipure chain for {x} did not close up: {e}") from None
    # x below x_1: x = r x_1 and, with a unit, t = 1
    xp = x.padded(max(x.rows, r.rows), max(x.cols, D))
    if R.unit is not None:
        rr = r.padded(r.rows, D)
        w = SubordinationWitness(rr, RingMatrix.identity(R, D))
        if not w.verify(xp, terms[0]):
            w = None
    else:
        w = None
    if w is None:
        w = subordinate(xp, terms[0], budget)
    if w is None:
        raise SearchExhausted(f"no witness for {x} below {terms[0]}")
    chain.links = make_chain(terms, budget=budget).links
    chain.notes["anchor"] = (x, w)
    return chain


def anchor_verifies(c: ChainSequence) -> bool:
    x, w = c.notes["anchor"]
    return w.verify(x.padded(max(x.rows, w.left.rows), max(x.cols, w.right.cols)), c.terms[0])


# ---------------------------------------------------------------- S-closure

def _weak_schedule(family, budget):
    """Pairs (n_m, l_m) with x^{(n_m)}_{l_m + 1} below x^{(n_{m+1})}_{l_{m+1}}."""
    K = len(family)
    path = [(0, 0)]
    steps = []
    while True:
        n, l = path[-1]
        src = family[n].term(l + 1)
        n2 = min(n + 1, K - 1)
        nxt = family[n2]
        start = min(l + 1, len(nxt) - 1) if n2 == n else 0
        for l2 in range(start, len(nxt)):
            w = subordinate(src, nxt.terms[l2], budget)
            if w is not None:
                break
        else:
            raise HypothesisFailed(f"member {n} index {l + 1} is not below member {n2}")
        steps.append(w)
        if (n2, l2) == (n, l) == (K - 1, len(nxt) - 1):
            return path, steps
        path.append((n2, l2))


def s_closure_check(family, budget=None) -> ChainSequence:
    """The twisted chain x^{(n_m)}_{l_m} d_{m-1} for a weakly increasing family.

    Members must carry S-witnesses.  A finite family counts as weakly
    increasing when every member is below the last one.  The returned chain
    carries its own S-witnesses and is checked equivalent to the diagonal.
    """
    if not family:
        raise HypothesisFailed("empty family")
    R = _same_ring(*family)
    budget = budget if isinstance(budget, Budget) else Budget(budget or 10**8)
    for k, c in enumerate(family):
        if c.s_witnesses is None or not check_s_witnesses(c):
            raise HypothesisFailed(f"member {k} has no valid S-witnesses")
    if all(len(c) == len(family[0]) and all(a.same_element(b) for a, b in zip(c.terms, family[0].terms))
           for c in family):
        return family[0]
    for k, c in enumerate(family):
        if not chain_rel(c, family[-1], "le", budget).holds:
            raise HypothesisFailed(f"member {k} is not below the last member")
    D = max(c.dim for c in family)
    family = [_pad_chain(c, D) for c in family]
    path, steps = _weak_schedule(family, budget)
    # one extra step at the fixed point makes the d's stationary
    path.append(path[-1])
    steps.append(steps[-1])
    cs = [w.left for w in steps]
    ds = [w.right for w in steps]
    xs = [family[n].term(l) for n, l in path]
    terms = [xs[m] @ ds[m - 1] for m in range(1, len(path))]
    ys = [family[n].witness(l) @ cs[m] for m, (n, l) in enumerate(path) if m >= 1]
    chain = ChainSequence(R, terms, REPEAT_LAST, ys, None, {"schedule": path})
    if not check_s_witnesses(chain):
        raise HypothesisFailed("twisted chain identity failed")
    chain.links = make_chain(terms, budget=budget).links
    diagonal = make_chain(xs, budget=budget)
    if not chain_rel(chain, diagonal, "equiv", budget).holds:
        raise HypothesisFailed("twisted chain is not equivalent to the diagonal")
    if not chain_rel(chain, family[-1], "equiv", budget).holds:
        raise HypothesisFailed("twisted chain is not equivalent to the supremum")
    chain.notes["diagonal"] = diagonal
    return chain


# ---------------------------------------------------------------- interpolation

def is_normalized(c: ChainSequence) -> bool:
    """x_{n+1} x_n = x_n for all n, tail included."""
    return all((c.term(n + 1) @ c.terms[n]).same_element(c.terms[n]) for n in range(len(c.terms)))


def interpolate_dense(c: ChainSequence, mode: str = "dense", steps: int = 2, budget=None) -> list:
    """Chains z_m with z_m prec z_{m+1} prec c whose supremum is c.

    mode 'dense' interpolates each link x_n below x_{n+1}; mode 'normal'
    needs a normalized chain and builds each z from left-normal witnesses.
    """
    R = c.ring
    budget = budget if isinstance(budget, Budget) else Budget(budget or 10**8)
    N = len(c.terms)
    members = []
    if mode == "dense":
        for n in range(N):
            cur, top = c.terms[n], c.term(n + 1)
            zs = [cur]
            for _ in range(steps):
                found = find_interpolant(cur, top, c.dim + 1, budget)
                if found is None:
                    raise InterpolantNotFound(f"no interpolant between {cur} and {top}")
                cur = found[0]
                zs.append(cur)
            try:
                members.append(make_chain(zs, ring=R, budget=budget))
            except (NotAChain, TailInadmissible) as e:
                raise InterpolantNotFound(str(e)) from None
        stride = 1
    elif mode == "normal":
        if not is_normalized(c):
            raise HypothesisFailed("normal mode needs x_{n+1} x_n = x_n")
        for n in range(N):
            try:
                ds = normal_chain(c.terms[n], c.term(n + 1), c.term(n + 2), steps, budget)
                z = make_chain(ds, ring=R, budget=budget)
                members.append(certify_s_membership(z))
            except (WitnessNotFound, NotAChain, TailInadmissible, NotInS) as e:
                raise InterpolantNotFound(str(e)) from None
        stride = 2
    else:
        raise ValueError(f"unknown mode {mode!r}")
    picked = sorted(set(list(range(0, N, stride)) + [N - 1]))
    chosen = [members[i] for i in picked]
    for a, b in zip(chosen, chosen[1:]):
        if not chain_rel(a, b, "prec", budget).holds:
            raise InterpolantNotFound("interpolating chains are not prec-increasing")
    for z in chosen:
        if not chain_rel(z, c, "prec", budget).holds:
            raise InterpolantNotFound("an interpolating chain is not prec below the input")
    sup = chain_sup(chosen, budget=budget)
    if not chain_rel(sup, c, "equiv", budget).holds:
        raise InterpolantNotFound("supremum of the interpolating chains differs from the input")
    return chosen
