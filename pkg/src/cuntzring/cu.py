"""Ordered monoids, interval semigroups and Cu-axiom checks.

Elements of a CuStructure are integer vectors, one coordinate per factor.
A finite factor stores indices into a FinitePoM; an extended-natural factor
stores values in N with the sentinel INF for infinity.  Every relation and
operation is evaluated coordinatewise and vectorized over numpy arrays.

Increasing sequences are described by models: per coordinate either a
constant value (eventually constant sequences) or UNBOUNDED (finite values
tending to infinity).  In a finite poset every increasing sequence is of the
first kind, so the axioms reduce to finitely many checks.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (AxiomViolation, BudgetExceeded, CofinalityFailed, NotAnIdeal,
                     NotWeaklySUnital, SizeLimitExceeded, SpecParseError)

INF = 1 << 40
BIG = 1 << 20          # a finite value beyond every grid
UNBOUNDED = -1
MAX_FACTORS = 6
MAX_FINITE = 32


# ---------------------------------------------------------------- finite PoMs

class FinitePoM:
    """Commutative monoid on 0..n-1 with a compatible positive order."""

    def __init__(self, add, leq, zero: int = 0, name: str = "", labels=None):
        self.add = np.asarray(add, dtype=np.int64)
        self.leq = np.asarray(leq, dtype=bool)
        self.size = len(self.add)
        self.zero = zero
        self.name = name or f"pom{self.size}"
        self.labels = list(labels) if labels is not None else [str(i) for i in range(self.size)]

    def __repr__(self):
        return f"FinitePoM({self.name})"

    def violations(self) -> list[str]:
        n, A, L, z = self.size, self.add, self.leq, self.zero
        out = []
        if A.shape != (n, n) or L.shape != (n, n) or not ((A >= 0) & (A < n)).all():
            return ["tables have the wrong shape or range"]
        if not L.diagonal().all():
            out.append("order is not reflexive")
        if (L & L.T & ~np.eye(n, dtype=bool)).any():
            out.append("order is not antisymmetric")
        if (L[:, :, None] & L[None, :, :] & ~L[:, None, :]).any():
            out.append("order is not transitive")
        if not L[z].all():
            out.append("zero is not below every element")
        if not (A == A.T).all():
            out.append("addition is not commutative")
        if not (A[A, :] == A[:, A]).all():
            out.append("addition is not associative")
        if not (A[z] == np.arange(n)).all():
            out.append("zero is not neutral")
        # x <= y implies x + w <= y + w
        xs, ys = np.nonzero(L)
        if not L[A[xs], A[ys]].all():
            out.append("addition is not monotone")
        return out

    def validate(self) -> "FinitePoM":
        bad = self.violations()
        if bad:
            raise AxiomViolation(f"{self.name}: " + "; ".join(bad))
        return self

    def to_json(self):
        return {"name": self.name, "add": self.add.tolist(), "leq": self.leq.astype(int).tolist()}


def chain(n: int, mode: str = "trunc") -> FinitePoM:
    """{0..n-1} in its usual order; addition truncated at n-1 or the maximum."""
    v = np.arange(n)
    add = np.minimum(v[:, None] + v[None, :], n - 1) if mode == "trunc" else np.maximum(v[:, None], v[None, :])
    return FinitePoM(add, v[:, None] <= v[None, :], 0, f"{'chain' if mode == 'trunc' else 'maxchain'}({n})").validate()


def pom_product(P: FinitePoM, Q: FinitePoM) -> FinitePoM:
    n, m = P.size, Q.size
    a, b = np.divmod(np.arange(n * m), m)
    add = P.add[a[:, None], a[None, :]] * m + Q.add[b[:, None], b[None, :]]
    leq = P.leq[a[:, None], a[None, :]] & Q.leq[b[:, None], b[None, :]]
    labels = [f"({P.labels[i]},{Q.labels[j]})" for i, j in zip(a, b)]
    return FinitePoM(add, leq, P.zero * m + Q.zero, f"{P.name}x{Q.name}", labels).validate()


def is_morphism(P: FinitePoM, Q: FinitePoM, f) -> bool:
    """Preserves zero, addition and order."""
    f = np.asarray(f)
    if f[P.zero] != Q.zero or not (f[P.add] == Q.add[f[:, None], f[None, :]]).all():
        return False
    xs, ys = np.nonzero(P.leq)
    return bool(Q.leq[f[xs], f[ys]].all())


def down_sets(P: FinitePoM):
    """All down-sets of P, by backtracking along a linear extension."""
    order = sorted(range(P.size), key=lambda x: int(P.leq[:, x].sum()))
    below = [np.nonzero(P.leq[:, x])[0] for x in range(P.size)]
    out = []

    def rec(i, inside):
        if i == len(order):
            out.append(frozenset(inside))
            return
        x = order[i]
        rec(i + 1, inside)
        if all(y in inside for y in below[x] if y != x):
            inside.add(x)
            rec(i + 1, inside)
            inside.discard(x)

    rec(0, set())
    return out


def is_directed(P: FinitePoM, S) -> bool:
    S = list(S)
    if not S:
        return False
    idx = np.asarray(S)
    ub = P.leq[idx][:, idx]   # ub[i, k]: S[i] <= S[k]
    return all((ub[i] & ub[j]).any() for i in range(len(S)) for j in range(i, len(S)))


def intervals(P: FinitePoM):
    """Nonempty, upward directed, order-hereditary subsets (all countably generated)."""
    return [S for S in down_sets(P) if is_directed(P, S)]


def interval_sum(P: FinitePoM, I, J) -> frozenset:
    """{x : x <= y + z for some y in I, z in J}."""
    sums = {int(P.add[y, z]) for y in I for z in J}
    return frozenset(x for x in range(P.size) if any(P.leq[x, s] for s in sums))


def principal(P: FinitePoM, x: int) -> frozenset:
    return frozenset(np.nonzero(P.leq[:, x])[0].tolist())


# ---------------------------------------------------------------- symbolic monoids

class NatFactor:
    """The monoid N with its usual order."""
    name = "nat"

    def __repr__(self):
        return "nat"


NAT = NatFactor()


@dataclass
class SimplePoM:
    factors: list

    @property
    def name(self) -> str:
        return "x".join(f.name for f in self.factors)


# ---------------------------------------------------------------- Cu structures

class CuStructure:
    """Product of finite Cu factors and copies of N with infinity adjoined."""

    def __init__(self, factors, name: str = ""):
        if len(factors) > MAX_FACTORS:
            raise SizeLimitExceeded(f"at most {MAX_FACTORS} factors")
        self.factors = list(factors)
        self.k = len(self.factors)
        self.name = name or "x".join("nat+inf" if f is NAT else f.name for f in self.factors)

    def __repr__(self):
        return f"CuStructure({self.name})"

    @property
    def is_finite(self) -> bool:
        return all(f is not NAT for f in self.factors)

    @property
    def zero(self) -> np.ndarray:
        return np.asarray([0 if f is NAT else f.zero for f in self.factors], dtype=np.int64)

    # per-factor relations; mutants override these
    def _leq(self, i, a, b):
        f = self.factors[i]
        return a <= b if f is NAT else f.leq[a, b]

    def _add(self, i, a, b):
        f = self.factors[i]
        return np.where((a >= INF) | (b >= INF), INF, a + b) if f is NAT else f.add[a, b]

    def _ll(self, i, a, b):
        f = self.factors[i]
        return (a < INF) & (a <= b) if f is NAT else f.leq[a, b]

    def leq(self, X, Y):
        X, Y = np.asarray(X), np.asarray(Y)
        out = np.ones(np.broadcast_shapes(X.shape, Y.shape)[:-1], dtype=bool)
        for i in range(self.k):
            out &= self._leq(i, X[..., i], Y[..., i])
        return out

    def ll(self, X, Y):
        X, Y = np.asarray(X), np.asarray(Y)
        out = np.ones(np.broadcast_shapes(X.shape, Y.shape)[:-1], dtype=bool)
        for i in range(self.k):
            out &= self._ll(i, X[..., i], Y[..., i])
        return out

    def add(self, X, Y):
        X, Y = np.asarray(X), np.asarray(Y)
        X, Y = np.broadcast_arrays(X, Y)
        return np.stack([self._add(i, X[..., i], Y[..., i]) for i in range(self.k)], axis=-1)

    # finite truncations
    def factor_values(self, i, bound: int):
        f = self.factors[i]
        return list(range(bound + 1)) + [INF] if f is NAT else list(range(f.size))

    def grid(self, bound: int) -> np.ndarray:
        vals = [self.factor_values(i, bound) for i in range(self.k)]
        return np.asarray(list(itertools.product(*vals)), dtype=np.int64).reshape(-1, self.k)

    def models(self, bound: int) -> np.ndarray:
        """Increasing-sequence models: constants, plus UNBOUNDED on N factors."""
        vals = [self.factor_values(i, bound) + ([UNBOUNDED] if f is NAT else [])
                for i, f in enumerate(self.factors)]
        return np.asarray(list(itertools.product(*vals)), dtype=np.int64).reshape(-1, self.k)

    def fmt(self, x) -> str:
        parts = []
        for i, v in enumerate(np.asarray(x).tolist()):
            f = self.factors[i]
            parts.append(("inf" if v >= INF else str(v)) if f is NAT else f.labels[v])
        return "(" + ",".join(parts) + ")"


def model_sup(m: np.ndarray) -> np.ndarray:
    return np.where(m == UNBOUNDED, INF, m)


def _model_tail(m: np.ndarray) -> np.ndarray:
    """A late term of the model: the constant, or a large finite value."""
    return np.where(m == UNBOUNDED, BIG, m)


def model_terms(m: np.ndarray, count: int) -> np.ndarray:
    """The first `count` terms: constants repeat, unbounded coordinates count up."""
    m = np.asarray(m)[..., None, :]
    return np.where(m == UNBOUNDED, np.arange(count)[:, None], m)


def model_add(S: CuStructure, m1, m2):
    """Termwise sum of two models (any unbounded coordinate stays unbounded)."""
    c = S.add(np.where(m1 == UNBOUNDED, 0, m1), np.where(m2 == UNBOUNDED, 0, m2))
    return np.where((m1 == UNBOUNDED) | (m2 == UNBOUNDED), UNBOUNDED, c)


def grid_bound(S: CuStructure) -> int:
    nats = sum(1 for f in S.factors if f is NAT)
    return {0: 0, 1: 8, 2: 8}.get(nats, 2)


# ---------------------------------------------------------------- axioms

@dataclass
class AxiomResult:
    ok: bool
    witness: str | None = None


@dataclass
class CuReport:
    structure: str
    results: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def failed(self):
        return [k for k, r in self.results.items() if not r.ok]

    def to_json(self):
        return {"structure": self.structure,
                "results": {k: {"ok": r.ok, "witness": r.witness} for k, r in self.results.items()}}


def _first(mask):
    idx = np.argwhere(mask)
    return tuple(int(v) for v in idx[0]) if len(idx) else None


def check_cu_axioms(S: CuStructure, bound: int | None = None) -> CuReport:
    """PoM axioms and O1-O4 on a grid of values and sequence models.

    For N factors the grid holds 0..bound and infinity (bound 8 for up to two
    N factors, 2 for three).  The way-below relation stored in S is compared
    with the one computed from the sequence models.
    """
    b = grid_bound(S) if bound is None else bound
    G = S.grid(b)
    Mo = S.models(b)
    rep = CuReport(S.name)
    z = S.zero
    # ordered monoid axioms
    L = S.leq(G[:, None], G[None, :])
    A = S.add(G[:, None], G[None, :])
    same = (G[:, None] == G[None, :]).all(-1)
    msgs = []
    if not L.diagonal().all():
        msgs.append("reflexivity")
    if (L & L.T & ~same).any():
        i, j = _first(L & L.T & ~same)
        msgs.append(f"antisymmetry {S.fmt(G[i])} {S.fmt(G[j])}")
    if (L[:, :, None] & L[None, :, :] & ~L[:, None, :]).any():
        msgs.append("transitivity")
    if not S.leq(z, G).all():
        msgs.append("zero not least")
    if not (S.add(z, G) == G).all():
        msgs.append("zero not neutral")
    if not (A == A.transpose(1, 0, 2)).all():
        msgs.append("commutativity")
    xs, ys = np.nonzero(L)
    mono = S.leq(S.add(G[xs][:, None], G[None, :]), S.add(G[ys][:, None], G[None, :]))
    if not mono.all():
        i, w = _first(~mono)
        msgs.append(f"monotonicity {S.fmt(G[xs[i]])}<={S.fmt(G[ys[i]])} + {S.fmt(G[w])}")
    rep.results["PoM"] = AxiomResult(not msgs, "; ".join(msgs) or None)

    # O1: the model supremum is the least upper bound
    sups = model_sup(Mo)
    tails = _model_tail(Mo)
    terms = np.concatenate([model_terms(Mo, b + 2), tails[:, None, :]], axis=1)
    cand = np.concatenate([G, sups])
    is_ub = S.leq(terms[:, :, None, :], cand[None, None, :, :]).all(axis=1)
    sup_is_ub = S.leq(terms, sups[:, None, :]).all(axis=1)
    least = (S.leq(sups[:, None], cand[None, :]) | ~is_ub).all(axis=1)
    bad = ~sup_is_ub | ~least
    rep.results["O1"] = AxiomResult(not bad.any(), None if not bad.any() else f"model {Mo[int(np.argmax(bad))].tolist()}")

    # O2: every element is the supremum of a way-below increasing sequence,
    # and the stored way-below relation is the one the models define
    ll_tab = S.ll(G[:, None], G[None, :])
    dominates = S.leq(G[:, None], sups[None, :])     # (y, m): y <= sup m
    ev_ge = S.leq(G[:, None], tails[None, :])        # (x, m): x <= m_n eventually
    ll_def = ~(dominates[None, :, :] & ~ev_ge[:, None, :]).any(axis=2)
    msgs = []
    if (ll_tab != ll_def).any():
        i, j = _first(ll_tab != ll_def)
        msgs.append(f"way-below mismatch at {S.fmt(G[i])} << {S.fmt(G[j])}: stored {bool(ll_tab[i, j])}")
    approx = np.where(G >= INF, UNBOUNDED, G)
    for x, m in zip(G, approx):
        seq = model_terms(m, b + 3)
        if not S.ll(seq[:-1], seq[1:]).all() or not (model_sup(m) == x).all():
            msgs.append(f"{S.fmt(x)} is not a supremum of a way-below increasing sequence")
            break
    rep.results["O2"] = AxiomResult(not msgs, "; ".join(msgs) or None)

    # O3: x' << x and y' << y give x' + y' << x + y
    pairs = np.argwhere(ll_tab)
    bad3 = None
    P1, P2 = G[pairs[:, 0]], G[pairs[:, 1]]
    for i in range(len(pairs)):
        ok = S.ll(S.add(P1[i], P1), S.add(P2[i], P2))
        if not ok.all():
            j = int(np.argmin(ok))
            bad3 = f"{S.fmt(P1[i])}<<{S.fmt(P2[i])}, {S.fmt(P1[j])}<<{S.fmt(P2[j])}"
            break
    rep.results["O3"] = AxiomResult(bad3 is None, bad3)

    # O4: suprema commute with addition
    bad4 = None
    for i in range(len(Mo)):
        summed = model_add(S, Mo[i][None, :], Mo)
        lhs = model_sup(summed)
        rhs = S.add(sups[i], sups)
        diff = ~(S.leq(lhs, rhs) & S.leq(rhs, lhs))
        if diff.any():
            j = int(np.argmax(diff))
            bad4 = f"models {Mo[i].tolist()} and {Mo[j].tolist()}"
            break
    rep.results["O4"] = AxiomResult(bad4 is None, bad4)
    return rep


class Mutant(CuStructure):
    """A CuStructure with some factor relations replaced (for mutation tests)."""

    def __init__(self, base: CuStructure, name: str, leq=None, add=None, ll=None):
        super().__init__(base.factors, f"{base.name}[{name}]")
        self._over = {"leq": leq, "add": add, "ll": ll}

    def _leq(self, i, a, b):
        f = self._over["leq"]
        return f(a, b) if f and self.factors[i] is NAT else super()._leq(i, a, b)

    def _add(self, i, a, b):
        f = self._over["add"]
        return f(a, b) if f and self.factors[i] is NAT else super()._add(i, a, b)

    def _ll(self, i, a, b):
        f = self._over["ll"]
        return f(a, b) if f and self.factors[i] is NAT else super()._ll(i, a, b)


def seeded_mutants(S: CuStructure) -> list[Mutant]:
    """Five corruptions of the N-with-infinity arithmetic."""
    base_add = lambda a, b: np.where((a >= INF) | (b >= INF), INF, a + b)
    return [
        Mutant(S, "inf<<inf", ll=lambda a, b: ((a < INF) & (a <= b)) | ((a >= INF) & (b >= INF))),
        Mutant(S, "no-compact-1", ll=lambda a, b: (a < INF) & (a <= b) & ~((a == 1) & (b == 1))),
        Mutant(S, "inf-not-absorbing", add=lambda a, b: np.where((a >= INF) & (b > 0) & (b < INF), b,
                                                                np.where((b >= INF) & (a > 0) & (a < INF), a,
                                                                         base_add(a, b)))),
        Mutant(S, "inf-below-5", leq=lambda a, b: (a <= b) | ((a >= INF) & (b >= 5))),
        Mutant(S, "small-compacts", ll=lambda a, b: (a < INF) & (a <= b) & (a <= 3)),
    ]


# ---------------------------------------------------------------- interval semigroups

@dataclass
class LambdaSigma:
    source: SimplePoM
    structure: CuStructure
    interval_sets: dict            # factor index -> list of intervals (finite factors)
    compacts: np.ndarray           # grid of compact elements
    to_compact: object             # M element -> compact element of the structure
    from_compact: object

    def check_compacts_iso(self, bound: int = 4) -> bool:
        """Both maps between M and the compacts, checked on a grid."""
        S = self.structure
        Mg = _source_grid(self.source, bound)
        img = np.asarray([self.to_compact(x) for x in Mg])
        if not S.ll(img, img).all():
            return False
        back = np.asarray([self.from_compact(c) for c in img])
        if not (back == Mg).all():
            return False
        comp = self.compacts
        comp = comp[(comp < INF).all(-1) & (comp <= bound).all(-1) | _finite_mask(S, comp)]
        if not all((self.to_compact(self.from_compact(c)) == c).all() for c in comp):
            return False
        for i, j in itertools.product(range(len(Mg)), repeat=2):
            s = _source_add(self.source, Mg[i], Mg[j])
            if not (S.add(img[i], img[j]) == self.to_compact(s)).all():
                return False
            if bool(S.leq(img[i], img[j])) != _source_leq(self.source, Mg[i], Mg[j]):
                return False
        return True


def _finite_mask(S, comp):
    return np.asarray([all(f is not NAT for f in S.factors)] * len(comp))


def _source_grid(M: SimplePoM, bound):
    vals = [list(range(bound + 1)) if f is NAT else list(range(f.size)) for f in M.factors]
    return np.asarray(list(itertools.product(*vals)), dtype=np.int64).reshape(-1, len(M.factors))


def _source_add(M: SimplePoM, x, y):
    return np.asarray([x[i] + y[i] if f is NAT else f.add[x[i], y[i]] for i, f in enumerate(M.factors)])


def _source_leq(M: SimplePoM, x, y) -> bool:
    return all((x[i] <= y[i]) if f is NAT else bool(f.leq[x[i], y[i]]) for i, f in enumerate(M.factors))


def interval_pom(P: FinitePoM):
    """Lambda_sigma of a finite PoM computed from its intervals.

    Returns the PoM of intervals (inclusion order, interval addition) and
    the list of intervals in index order.
    """
    ivs = sorted(intervals(P), key=lambda S: (len(S), sorted(S)))
    index = {S: i for i, S in enumerate(ivs)}
    n = len(ivs)
    add = np.zeros((n, n), dtype=np.int64)
    for i, j in itertools.product(range(n), repeat=2):
        s = interval_sum(P, ivs[i], ivs[j])
        if s not in index:
            raise AxiomViolation("sum of intervals is not an interval")
        add[i, j] = index[s]
    leq = np.asarray([[a <= b for b in ivs] for a in ivs])
    Q = FinitePoM(add, leq, index[principal(P, P.zero)], f"Lsigma({P.name})",
                  ["{" + ",".join(P.labels[x] for x in sorted(S)) + "}" for S in ivs]).validate()
    return Q, ivs


def lambda_sigma(M: SimplePoM) -> LambdaSigma:
    """Interval semigroup of M with the isomorphism of its compacts onto M."""
    if len(M.factors) > MAX_FACTORS:
        raise SizeLimitExceeded(f"at most {MAX_FACTORS} factors")
    factors, ivsets, maps = [], {}, []
    for i, f in enumerate(M.factors):
        if f is NAT:
            factors.append(NAT)
            maps.append(None)
            continue
        if f.size > MAX_FINITE:
            raise SizeLimitExceeded(f"finite factors have at most {MAX_FINITE} elements")
        Q, ivs = interval_pom(f)
        factors.append(Q)
        ivsets[i] = ivs
        maps.append(({x: ivs.index(principal(f, x)) for x in range(f.size)},
                     {ivs.index(principal(f, x)): x for x in range(f.size)}))
    S = CuStructure(factors, f"Lsigma({M.name})")

    def to_c(x):
        return np.asarray([x[i] if m is None else m[0][int(x[i])] for i, m in enumerate(maps)])

    def from_c(c):
        return np.asarray([c[i] if m is None else m[1][int(c[i])] for i, m in enumerate(maps)])

    G = S.grid(grid_bound(S))
    comp = G[S.ll(G, G)]
    return LambdaSigma(M, S, ivsets, comp, to_c, from_c)


def nat_interval_check(k: int, T: int) -> bool:
    """Directed down-sets of {0..T}^k are exactly the boxes.

    A box whose side reaches T stands for an infinite coordinate; sums of
    boxes, computed with the interval formula and cut at T, agree with the
    saturating coordinatewise sum.
    """
    box = chain(T + 1)
    P = box
    for _ in range(k - 1):
        P = pom_product(P, box)
    found = intervals(P)
    boxes = {principal(P, x): x for x in range(P.size)}
    if set(found) != set(boxes):
        return False
    coords = lambda x: np.unravel_index(x, (T + 1,) * k)
    for I in found:
        for J in found:
            s = frozenset(y for y in range(P.size)
                          if any(all(a <= min(b + c, T) for a, b, c in zip(coords(y), coords(i), coords(j)))
                                 for i in I for j in J))
            tip = tuple(min(b + c, T) for b, c in zip(coords(boxes[I]), coords(boxes[J])))
            if s != principal(P, int(np.ravel_multi_index(tip, (T + 1,) * k))):
                return False
    return True


# ---------------------------------------------------------------- ideals and quotients of Cu structures

def _finite_cu(P: FinitePoM) -> CuStructure:
    return CuStructure([P], P.name)


def cu_ideals_finite(P: FinitePoM) -> list[frozenset]:
    """Down-closed submonoids (closure under suprema is automatic)."""
    out = []
    for D in down_sets(P):
        if P.zero in D and all(int(P.add[a, b]) in D for a in D for b in D):
            out.append(D)
    return sorted(out, key=lambda S: (len(S), sorted(S)))


def ideal_join_finite(P: FinitePoM, I, J) -> frozenset:
    return interval_sum(P, I, J)


def cu_ideals_nat(k: int) -> list[frozenset]:
    """Ideals of (N u inf)^k as supports: {x : x_i = 0 off A}."""
    return [frozenset(A) for r in range(k + 1) for A in itertools.combinations(range(k), r)]


def nat_ideal_check(k: int, T: int = 3) -> bool:
    """Brute force on the grid: the ideal generated by g is given by its support."""
    S = CuStructure([NAT] * k)
    G = S.grid(T)
    for g in G:
        # multiples of g, with infinity where g is nonzero (supremum of n.g)
        gen = [np.where(g > 0, np.minimum(n * g, INF), 0) for n in range(T + 2)] + [np.where(g > 0, INF, 0)]
        gen = np.asarray(gen)
        ideal = {tuple(x) for x in G if S.leq(x, gen).any()}
        supp = set(np.nonzero(g)[0].tolist())
        want = {tuple(x) for x in G if set(np.nonzero(x)[0].tolist()) <= supp}
        if ideal != want:
            return False
    return True


@dataclass
class IdealLatticeCu:
    ideals: list
    meet: dict
    join: dict


def cu_ideal_ops(S, which: str = "enumerate", J=None):
    """Ideals of S with meet and join, or the quotient S/J.

    S is a FinitePoM, a finite CuStructure, or a CuStructure of N factors;
    ideals of the latter are given as sets of coordinates (the support).
    """
    P = S.factors[0] if isinstance(S, CuStructure) and S.is_finite and S.k == 1 else S
    if isinstance(P, FinitePoM):
        if which == "enumerate":
            ids = cu_ideals_finite(P)
            meet, join = {}, {}
            for a, b in itertools.combinations_with_replacement(range(len(ids)), 2):
                m, j = ids[a] & ids[b], ideal_join_finite(P, ids[a], ids[b])
                if m not in ids or j not in ids:
                    raise NotAnIdeal("ideal lattice is not closed")
                meet[(a, b)] = meet[(b, a)] = ids.index(m)
                join[(a, b)] = join[(b, a)] = ids.index(j)
            return IdealLatticeCu(ids, meet, join)
        if which == "quotient":
            return quotient_finite(P, frozenset(J))
    elif isinstance(S, CuStructure) and all(f is NAT for f in S.factors):
        if which == "enumerate":
            ids = cu_ideals_nat(S.k)
            meet = {(a, b): ids.index(ids[a] & ids[b]) for a in range(len(ids)) for b in range(len(ids))}
            join = {(a, b): ids.index(ids[a] | ids[b]) for a in range(len(ids)) for b in range(len(ids))}
            return IdealLatticeCu(ids, meet, join)
        if which == "quotient":
            return quotient_nat(S, frozenset(J))
    raise ValueError(f"unsupported structure or operation {which!r}")


@dataclass
class CuQuotient:
    structure: object          # FinitePoM or CuStructure
    classes: list              # class index -> representatives
    project: object            # element -> class
    prec: np.ndarray | None = None
    report: CuReport | None = None


def quotient_finite(P: FinitePoM, J: frozenset) -> CuQuotient:
    if J not in cu_ideals_finite(P):
        raise NotAnIdeal(f"{sorted(J)} is not an ideal of {P.name}")
    n = P.size
    Jl = sorted(J)
    le_J = np.zeros((n, n), dtype=bool)
    for x in range(n):
        for y in range(n):
            le_J[x, y] = any(P.leq[x, P.add[y, z]] for z in Jl)
    cls = {}
    for x in range(n):
        key = frozenset(np.nonzero(le_J[x] & le_J[:, x])[0].tolist())
        cls.setdefault(key, len(cls))
    reps = sorted(cls, key=lambda k: min(k))
    proj = np.zeros(n, dtype=np.int64)
    for c, k in enumerate(reps):
        proj[list(k)] = c
    m = len(reps)
    r = [min(k) for k in reps]
    add = np.asarray([[proj[P.add[r[a], r[b]]] for b in range(m)] for a in range(m)])
    leq = np.asarray([[le_J[r[a], r[b]] for b in range(m)] for a in range(m)])
    Q = FinitePoM(add, leq, int(proj[P.zero]), f"{P.name}/J",
                  ["[" + ",".join(P.labels[x] for x in sorted(k)) + "]" for k in reps]).validate()
    # x_J prec y_J iff x <= y' + z and y' << y + w with z, w in J (<< is <= here)
    prec = np.zeros((m, m), dtype=bool)
    for a in range(m):
        for b in range(m):
            prec[a, b] = any(le_J[r[a], yp] and any(P.leq[yp, P.add[r[b], w]] for w in Jl) for yp in range(n))
    rep = check_cu_axioms(_finite_cu(Q))
    if not (rep.results["O1"].ok and rep.results["O4"].ok):
        raise AxiomViolation(f"quotient fails {rep.failed()}")
    return CuQuotient(Q, [sorted(k) for k in reps], lambda x: int(proj[x]), prec, rep)


def quotient_nat(S: CuStructure, J: frozenset, bound: int = 4) -> CuQuotient:
    """(N u inf)^k / J for a support ideal J, checked on a grid.

    The classes of the grid under x ~ y are computed from the definition
    x <= y + z (z in J); the result is matched to the product of the
    remaining coordinates by an isomorphism search.
    """
    G = S.grid(bound)
    off = ~np.isin(np.arange(S.k), sorted(J))
    Jg = G[~((G != 0) & off).any(-1)]
    le_J = np.zeros((len(G), len(G)), dtype=bool)
    for z in Jg:
        le_J |= S.leq(G[:, None], S.add(G[None, :], z))
    eq = le_J & le_J.T
    classes, seen = [], set()
    for i in range(len(G)):
        if i in seen:
            continue
        members = np.nonzero(eq[i])[0].tolist()
        seen.update(members)
        classes.append(members)
    rest = [i for i in range(S.k) if i not in J]
    T = CuStructure([NAT] * len(rest), f"{S.name}/J")
    TG = T.grid(bound)
    # quotient order and addition on class representatives
    reps = [G[c[0]] for c in classes]
    m = len(classes)
    qleq = np.asarray([[le_J[classes[a][0], classes[b][0]] for b in range(m)] for a in range(m)])
    iso = find_order_iso(qleq, T.leq(TG[:, None], TG[None, :]))
    if iso is None:
        raise AxiomViolation("quotient is not isomorphic to the expected product")
    cls_of = {}
    for c, mem in enumerate(classes):
        for i in mem:
            cls_of[tuple(G[i])] = c
    for a in range(m):
        for b in range(m):
            s = S.add(reps[a], reps[b])
            key = tuple(np.where(s >= INF, INF, np.minimum(s, bound)))
            ts = T.add(TG[iso[a]], TG[iso[b]])
            if (s < INF).all() and (s <= bound).all():
                if not (TG[iso[cls_of[key]]] == ts).all():
                    raise AxiomViolation("quotient addition does not match")
    rep = check_cu_axioms(T)
    if not (rep.results["O1"].ok and rep.results["O4"].ok):
        raise AxiomViolation(f"quotient fails {rep.failed()}")
    proj = lambda x: np.asarray(x)[rest]
    out = CuQuotient(T, [[tuple(G[i]) for i in c] for c in classes], proj, None, rep)
    out.iso = {tuple(reps[a]): tuple(TG[iso[a]]) for a in range(m)}
    return out


def find_order_iso(A: np.ndarray, B: np.ndarray):
    """A bijection p with A[i, j] == B[p[i], p[j]], by backtracking."""
    n = len(A)
    if len(B) != n:
        return None
    degA = [(int(A[i].sum()), int(A[:, i].sum())) for i in range(n)]
    degB = [(int(B[i].sum()), int(B[:, i].sum())) for i in range(n)]
    order = sorted(range(n), key=lambda i: degA[i])
    p = [-1] * n
    used = [False] * n

    def rec(t):
        if t == n:
            return True
        i = order[t]
        for c in range(n):
            if used[c] or degB[c] != degA[i]:
                continue
            if all(A[i, j] == B[c, p[j]] and A[j, i] == B[p[j], c] for j in order[:t]) and A[i, i] == B[c, c]:
                p[i], used[c] = c, True
                if rec(t + 1):
                    return True
                used[c] = False
        p[i] = -1
        return False

    return p if rec(0) else None


# ---------------------------------------------------------------- SQ pairs

@dataclass
class SQPairFin:
    S: FinitePoM
    W: frozenset
    prec: np.ndarray | None = None

    def __post_init__(self):
        self.W = frozenset(int(w) for w in self.W)
        if self.prec is None:
            self.prec = self.S.leq.copy()


@dataclass
class SQResult:
    ok: bool
    detail: dict = field(default_factory=dict)


def _validate_pair(P: SQPairFin) -> list[str]:
    S, W, pr = P.S, P.W, P.prec
    out = list(S.violations())
    if S.zero not in W:
        out.append("W does not contain 0")
    if any(int(S.add[a, b]) not in W for a in W for b in W):
        out.append("W is not closed under addition")
    if (pr & ~S.leq).any():
        out.append("prec is not stronger than the order")
    if not pr[S.zero].all():
        out.append("0 prec x fails")
    xs, ys = np.nonzero(pr)
    if not pr[S.add[xs[:, None], xs[None, :]], S.add[ys[:, None], ys[None, :]]].all():
        out.append("prec is not additive")
    # x' <= x prec y <= y' gives x' prec y'
    br = S.leq[:, :, None, None] & pr[None, :, :, None] & S.leq[None, None, :, :]
    if (br.any(axis=(1, 2)) & ~pr).any():
        out.append("prec is not stable under bracketing")
    # W closure under suprema of weakly increasing sequences: in a finite
    # poset such a sequence is eventually constant with every term below the
    # constant, so its supremum is a term and lies in W
    return out


def sq_pair_ops(P: SQPairFin, which: str = "validate", I=None) -> SQResult:
    S = P.S
    if which == "validate":
        bad = _validate_pair(P)
        return SQResult(not bad, {"violations": bad, "w_closure": "automatic for finite S"})
    I = frozenset(int(i) for i in I)
    IW = I & P.W
    cofinal = all(any(S.leq[i, w] for w in IW) for i in I)
    if which == "cofinal":
        return SQResult(cofinal, {"I": sorted(I), "I_cap_W": sorted(IW)})
    if which in ("quotient", "exact") and not cofinal:
        bad = next(i for i in sorted(I) if not any(S.leq[i, w] for w in IW))
        raise CofinalityFailed(f"{S.labels[bad]} in I is below no element of I meet W")
    if I not in cu_ideals_finite(S):
        raise NotAnIdeal(f"{sorted(I)} is not an ideal of {S.name}")
    if which == "ideal":
        sub = SQPairFin(_restrict(S, I), frozenset(sorted(I).index(w) for w in IW))
        bad = _validate_pair(sub)
        return SQResult(not bad, {"violations": bad, "I_cap_W": sorted(IW)})
    q = quotient_finite(S, I)
    Wl, IWl, Il = sorted(P.W), sorted(IW), sorted(I)
    if which == "quotient":
        # W/(I meet W) order-embeds in S/I
        ok = all(any(S.leq[a, S.add[b, z]] for z in IWl) == any(S.leq[a, S.add[b, z]] for z in Il)
                 for a in Wl for b in Wl)
        return SQResult(ok, {"classes": q.classes, "W_image": sorted({q.project(w) for w in Wl})})
    if which == "exact":
        kernel = {w for w in Wl if any(S.leq[w, z] for z in IWl)}
        image = set(IWl)
        return SQResult(kernel == image, {"kernel": sorted(kernel), "image": sorted(image)})
    raise ValueError(f"unknown operation {which!r}")


def _restrict(S: FinitePoM, elements) -> FinitePoM:
    el = sorted(elements)
    pos = {e: i for i, e in enumerate(el)}
    add = np.asarray([[pos[int(S.add[a, b])] for b in el] for a in el])
    leq = S.leq[np.ix_(el, el)]
    return FinitePoM(add, leq, pos[S.zero], f"{S.name}|I", [S.labels[e] for e in el])


# ---------------------------------------------------------------- direct systems

@dataclass
class PomSystem:
    kind: str                  # "endo" or "finite"
    poms: list
    maps: list                 # endo: [f]; finite: f_i from poms[i] to poms[i+1]

    def validate(self) -> "PomSystem":
        for k, f in enumerate(self.maps):
            src, dst = (self.poms[0], self.poms[0]) if self.kind == "endo" else (self.poms[k], self.poms[k + 1])
            if not is_morphism(src, dst, f):
                raise AxiomViolation(f"map {k} is not a PoM morphism")
        return self

    def obj(self, lam: int) -> FinitePoM:
        return self.poms[0] if self.kind == "endo" else self.poms[lam]

    def connecting(self, mu: int, lam: int) -> np.ndarray:
        """f_{mu, lam} for mu >= lam."""
        f = np.arange(self.obj(lam).size)
        for step in range(lam, mu):
            g = np.asarray(self.maps[0] if self.kind == "endo" else self.maps[step])
            f = g[f]
        return f

    @property
    def top(self):
        return None if self.kind == "endo" else len(self.poms) - 1


def endo_chain(M: FinitePoM, f) -> PomSystem:
    return PomSystem("endo", [M], [np.asarray(f, dtype=np.int64)]).validate()


def finite_chain(poms, maps) -> PomSystem:
    return PomSystem("finite", list(poms), [np.asarray(m, dtype=np.int64) for m in maps]).validate()


@dataclass
class Colimit:
    pom: FinitePoM
    maps: object               # lam -> array from the lam-th object into pom
    window: int

    def as_simple(self) -> SimplePoM:
        return SimplePoM([self.pom])


def pom_colimit(sys: PomSystem) -> Colimit:
    """Direct limit in PoM: algebraic limit with the asymptotic order."""
    if sys.kind == "finite":
        top = sys.top
        return Colimit(sys.poms[top], lambda lam: sys.connecting(top, lam), top)
    M, f = sys.poms[0], np.asarray(sys.maps[0])
    n = M.size
    fN = np.arange(n)
    for _ in range(n):
        fN = f[fN]
    image = sorted(set(fN.tolist()))
    pos = {e: i for i, e in enumerate(image)}
    sigma = np.asarray([pos[int(f[e])] for e in image])          # a permutation of the image
    period = 1
    p = sigma.copy()
    while not (p == np.arange(len(image))).all():
        p, period = sigma[p], period + 1
    inv = np.argsort(sigma)
    m = len(image)
    add = np.asarray([[pos[int(M.add[a, b])] for b in image] for a in image])
    # asymptotic order: u <= v iff f^d(u) <= f^d(v) for some d >= 0
    leq = np.zeros((m, m), dtype=bool)
    for a, u in enumerate(image):
        for b, v in enumerate(image):
            fu, fv = u, v
            for _ in range(period + n):
                if M.leq[fu, fv]:
                    leq[a, b] = True
                    break
                fu, fv = int(f[fu]), int(f[fv])
    L = FinitePoM(add, leq, pos[int(fN[M.zero])], f"lim({M.name})", [M.labels[e] for e in image]).validate()

    def f_lam(lam: int):
        out = np.asarray([pos[int(v)] for v in fN])
        for _ in range((n + lam) % period):
            out = inv[out]
        return out

    return Colimit(L, f_lam, n + period)


# ---------------------------------------------------------------- limits in Cu

@dataclass
class LimitReport:
    ok: bool
    conditions: dict

    def to_json(self):
        return {"ok": self.ok, "conditions": self.conditions}


def check_cu_limit(sys: PomSystem, S: FinitePoM, maps, window: int | None = None) -> LimitReport:
    """Conditions (a), (b), (c) for S with maps f_lam as a limit in Cu.

    The objects are finite, so way-below is the order.  Indices run over a
    window long enough for an endomorphism chain to become periodic.
    """
    n = max(P.size for P in sys.poms)
    W = window if window is not None else (sys.top if sys.kind == "finite" else 2 * n + 2)
    lams = range(W + 1)
    res = {"a": None, "b": None, "c": None}
    # (a) f_mu o f_{mu,lam} = f_lam
    for lam in lams:
        for mu in range(lam, W + 1):
            if not (maps(mu)[sys.connecting(mu, lam)] == maps(lam)).all():
                res["a"] = f"lam={lam}, mu={mu}"
                break
        if res["a"]:
            break
    # (b) x' << x in S_lam, f_lam(x) <= f_mu(y) give nu with f_{nu,lam}(x') << f_{nu,mu}(y)
    horizon = W if sys.kind == "finite" else W + n + 2
    for lam in lams:
        P = sys.obj(lam)
        for mu in lams:
            Q = sys.obj(mu)
            fl, fm = maps(lam), maps(mu)
            for x in range(P.size):
                for y in range(Q.size):
                    if not S.leq[fl[x], fm[y]]:
                        continue
                    for xp in np.nonzero(P.leq[:, x])[0]:
                        if not any(sys.obj(nu).leq[sys.connecting(nu, lam)[xp], sys.connecting(nu, mu)[y]]
                                   for nu in range(max(lam, mu), horizon + 1)):
                            res["b"] = f"lam={lam}, mu={mu}, x'={P.labels[xp]}, y={Q.labels[y]}"
                            break
                    if res["b"]:
                        break
                if res["b"]:
                    break
            if res["b"]:
                break
        if res["b"]:
            break
    # (c) x' << x in S gives y in some S_lam with x' <= f_lam(y) <= x
    for x in range(S.size):
        for xp in np.nonzero(S.leq[:, x])[0]:
            hit = any(S.leq[xp, fy] and S.leq[fy, x] for lam in lams for fy in maps(lam))
            if not hit:
                res["c"] = f"x'={S.labels[xp]}, x={S.labels[x]}"
                break
        if res["c"]:
            break
    conds = {k: {"ok": v is None, "witness": v} for k, v in res.items()}
    return LimitReport(all(v is None for v in res.values()), conds)


def lambda_sigma_system(sys: PomSystem):
    """Apply Lambda_sigma to every object and transport the maps."""
    lss = [lambda_sigma(SimplePoM([P])) for P in sys.poms]
    poms = [ls.structure.factors[0] for ls in lss]

    def transport(src_ls, dst_ls, f):
        return np.asarray([dst_ls.to_compact([int(f[src_ls.from_compact([c])[0]])])[0]
                           for c in range(src_ls.structure.factors[0].size)])

    if sys.kind == "endo":
        maps = [transport(lss[0], lss[0], sys.maps[0])]
        return PomSystem("endo", poms, maps).validate(), lss
    maps = [transport(lss[k], lss[k + 1], sys.maps[k]) for k in range(len(sys.maps))]
    return PomSystem("finite", poms, maps).validate(), lss


def check_continuity(sys: PomSystem) -> LimitReport:
    """Lambda_sigma of the PoM limit is the Cu limit of the Lambda_sigma system."""
    col = pom_colimit(sys)
    lsys, lss = lambda_sigma_system(sys)
    lcol = lambda_sigma(SimplePoM([col.pom]))
    target = lcol.structure.factors[0]

    def maps(lam):
        src = lss[0] if sys.kind == "endo" else lss[lam]
        f = col.maps(lam)
        return np.asarray([lcol.to_compact([int(f[src.from_compact([c])[0]])])[0]
                           for c in range(src.structure.factors[0].size)])

    return check_cu_limit(lsys, target, maps, col.window if sys.kind == "endo" else None)


def enlarged_candidate(col: Colimit):
    """The true limit times a two-element chain: a wrong candidate for tests."""
    big = pom_product(col.pom, chain(2))
    return big, (lambda lam: col.maps(lam) * 2)


def random_cocone_check(sys: PomSystem, col: Colimit, rng, trials: int = 3) -> bool:
    """Cocones g_lam = h o f_lam factor through the colimit (found by search)."""
    L = col.pom
    targets = [chain(3), chain(2, "max"), pom_product(chain(2), chain(2, "max"))]
    for t in range(trials):
        T = targets[t % len(targets)]
        homs = [np.asarray(h) for h in itertools.product(range(T.size), repeat=L.size)
                if is_morphism(L, T, h)]
        h = homs[int(rng.integers(len(homs)))]
        g = lambda lam: h[col.maps(lam)]
        found = [u for u in homs if all((u[col.maps(lam)] == g(lam)).all() for lam in range(col.window + 1))]
        if not found:
            return False
    return True


# ---------------------------------------------------------------- truncated W(R)

@dataclass
class TruncatedW:
    ring: str
    N: int
    classes: list              # representatives (N x N arrays)
    sizes: list                # smallest n with a representative in the top-left n x n corner
    order: np.ndarray
    add: dict                  # (i, j) -> class, where defined
    match: str

    def to_json(self):
        return {"ring": self.ring, "N": self.N, "classes": len(self.classes), "sizes": self.sizes,
                "order": self.order.astype(int).tolist(), "match": self.match}


def truncated_W(R, N: int = 2, budget: int = 10**8) -> TruncatedW:
    """Classes of mutual subordination among matrices of size <= N."""
    from .classes import Status, is_weakly_s_unital
    from .matrices import enumerate_matrices, matmul_arrays
    v = is_weakly_s_unital(R)
    if v.status != Status.HOLDS:
        raise NotWeaklySUnital(f"{R.meta} is not known to be weakly s-unital ({v.status.value})")
    total = R.size ** (N * N)
    if total * total * N ** 3 > budget or total > 1 << 12:
        raise BudgetExceeded(f"|M_{N}({R.meta})| = {total} is too large")
    Ms = enumerate_matrices(R, N, N)
    weights = R.size ** np.arange(N * N - 1, -1, -1)
    prod = np.empty((total, total), dtype=np.int64)     # prod[a, b]: index of Ms[a] @ Ms[b]
    for a in range(total):
        prod[a] = matmul_arrays(R, Ms[a][None], Ms).reshape(total, -1) @ weights
    reach = np.zeros((total, total), dtype=bool)        # reach[a]: the set Ms[a] M_N
    reach[np.arange(total)[:, None], prod] = True
    below = np.zeros((total, total), dtype=bool)        # below[i, j]: Ms[i] <= Ms[j]
    for j in range(total):
        below[:, j] = reach[np.unique(prod[:, j])].any(axis=0)
    eq = below & below.T
    cls_of = -np.ones(total, dtype=np.int64)
    reps = []
    for i in range(total):
        if cls_of[i] < 0:
            cls_of[eq[i]] = len(reps)
            reps.append(i)
    m = len(reps)
    order = np.asarray([[below[reps[a], reps[b]] for b in range(m)] for a in range(m)])
    if (order & order.T & ~np.eye(m, dtype=bool)).any():
        raise AxiomViolation("class order has a cycle")
    # the smallest corner holding a representative of each class
    sizes = []
    for c in range(m):
        members = Ms[cls_of == c]
        sizes.append(min(next(n for n in range(N + 1) if not members[k][n:, :].any() and not members[k][:, n:].any())
                         for k in range(len(members))))
    corner = {}
    for c in range(m):
        members = Ms[cls_of == c]
        for mat in members:
            n = sizes[c]
            if not mat[n:, :].any() and not mat[:, n:].any():
                corner[c] = mat[:n, :n]
                break
    add = {}
    for a in range(m):
        for b in range(m):
            if sizes[a] + sizes[b] <= N:
                big = np.full((N, N), R.zero, dtype=np.int64)
                na, nb = sizes[a], sizes[b]
                big[:na, :na] = corner[a]
                big[na:na + nb, na:na + nb] = corner[b]
                add[(a, b)] = int(cls_of[int(big.reshape(-1) @ weights)])
    match = _match_nat_power(m, order, add, sizes, N)
    return TruncatedW(R.meta, N, [Ms[r] for r in reps], sizes, order, add, match)


def _match_nat_power(m, order, add, sizes, N) -> str:
    """Compare with N^k truncated: atoms, unique atom sums, componentwise order."""
    zero = next(c for c in range(m) if order[c].all())
    atoms = [c for c in range(m) if c != zero and all(order[d, c] <= (d in (zero, c)) for d in range(m))]
    k = len(atoms)
    vec = {zero: (0,) * k}
    vec.update({a: tuple(int(i == j) for j in range(k)) for i, a in enumerate(atoms)})
    grew = True
    while grew:
        grew = False
        for (a, b), c in add.items():
            if a in vec and b in vec:
                v = tuple(x + y for x, y in zip(vec[a], vec[b]))
                if c in vec and vec[c] != v:
                    return "Unknown"
                if c not in vec:
                    vec[c], grew = v, True
    if len(vec) != m or len(set(vec.values())) != m:
        return "Unknown"
    for a in range(m):
        for b in range(m):
            if bool(order[a, b]) != all(x <= y for x, y in zip(vec[a], vec[b])):
                return "Unknown"
    return f"N^{k} truncated"


# ---------------------------------------------------------------- expressions

_FACTOR = re.compile(r"\s*(nat|chain\(\s*(\d+)\s*\)|maxchain\(\s*(\d+)\s*\)|pom\{(.*?)\}|[A-Za-z_]\w*)\s*", re.S)


def parse_pom(text: str, env: dict | None = None) -> SimplePoM:
    """Factor expressions joined by 'x' or '*': nat | chain(n) | maxchain(n) | pom{...} | name.

    pom{...} holds JSON fields "add" and "leq" (a 0/1 matrix), optionally
    "zero" and "labels".
    """
    env = env or {}
    factors, pos = [], 0
    text = text.strip()
    while True:
        m = _FACTOR.match(text, pos)
        if not m:
            raise SpecParseError(f"cannot parse PoM expression at offset {pos}: {text!r}")
        tok = m.group(1)
        if tok == "nat":
            factors.append(NAT)
        elif tok.startswith("chain("):
            factors.append(chain(int(m.group(2))))
        elif tok.startswith("maxchain("):
            factors.append(chain(int(m.group(3)), "max"))
        elif tok.startswith("pom{"):
            try:
                d = json.loads("{" + m.group(4) + "}")
                factors.append(FinitePoM(d["add"], np.asarray(d["leq"], dtype=bool), d.get("zero", 0),
                                         d.get("name", ""), d.get("labels")).validate())
            except (ValueError, KeyError) as e:
                raise SpecParseError(f"bad pom table: {e}") from None
        elif tok in env:
            factors.extend(env[tok].factors)
        else:
            raise SpecParseError(f"unknown PoM factor {tok!r}")
        pos = m.end()
        if pos >= len(text):
            break
        if text[pos] not in "x*":
            raise SpecParseError(f"expected 'x' between factors at offset {pos}")
        pos += 1
    if len(factors) > MAX_FACTORS:
        raise SizeLimitExceeded(f"at most {MAX_FACTORS} factors")
    return SimplePoM(factors)


def cu_of(M: SimplePoM) -> CuStructure:
    return lambda_sigma(M).structure


def corpus_poms() -> list[FinitePoM]:
    """Ten small finite PoMs (at most 12 elements)."""
    c2, c3, m2, m3 = chain(2), chain(3), chain(2, "max"), chain(3, "max")
    return [chain(1), c2, c3, chain(5), m3, pom_product(c2, c2), pom_product(c2, c3),
            pom_product(m2, m2), pom_product(m2, c3), pom_product(chain(3), chain(4))]
