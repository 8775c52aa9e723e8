"""Bounded decision procedures for ring classes.

The definitions quantify over matrices of every size; the checkers here
search sizes up to a bound B and say so in the verdict unless a structural
fact (a unit, R^2 = R, R^3 = 0) settles the question outright.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import BudgetExceeded, WitnessNotFound
from .matrices import (Budget, RingMatrix, enumerate_matrices, matmul_arrays,
                       subordinate)
from .rings import FiniteRing, additive_closure

ENUMERABLE = 1 << 16   # largest M_n(R) we hold in memory as one array
EXHAUSTIVE_TRIPLES = 256


class Status(str, Enum):
    HOLDS = "Holds"
    FAILS = "FailsWithCounterexample"
    HOLDS_UP_TO_BOUND = "HoldsUpToBound"


@dataclass
class ClassVerdict:
    status: Status
    bound: int
    counterexample: tuple | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status != Status.FAILS

    @property
    def conclusive_failure(self) -> bool:
        return self.status == Status.FAILS and self.metadata.get("conclusive", True)

    def to_json(self):
        out = {"status": self.status.value, "bound": self.bound, "metadata": self.metadata}
        if self.counterexample is not None:
            out["counterexample"] = [m.to_json() for m in self.counterexample]
        return out


def _span_of_products(R: FiniteRing, factors: int) -> list[int]:
    """Additive span of all products of `factors` ring elements."""
    current = list(range(R.size))
    for _ in range(factors - 1):
        cur = np.asarray(current)
        current = additive_closure(R, np.unique(R.mul[cur][:, np.arange(R.size)]).tolist())
    return current


def is_idempotent_ring(R: FiniteRing) -> bool:
    return len(_span_of_products(R, 2)) == R.size


def _sample_matrices(R: FiniteRing, n: int, count: int, rng) -> list[RingMatrix]:
    total = R.size ** (n * n)
    if total <= count:
        return [RingMatrix.from_array(R, a) for a in enumerate_matrices(R, n, n)]
    return [RingMatrix.from_array(R, rng.integers(0, R.size, size=(n, n))) for _ in range(count)]


# ---------------------------------------------------------------- weakly s-unital

def is_weakly_s_unital(R: FiniteRing, B: int = 2, budget=None, samples: int = 64, seed: int = 0) -> ClassVerdict:
    """Does every x satisfy x = s.x.t?  Any failure is conclusive."""
    if R.unit is not None:
        return ClassVerdict(Status.HOLDS, B, metadata={"reason": "unital"})
    rng = np.random.default_rng(seed)
    inconclusive = 0
    for n in range(1, B + 1):
        for x in _sample_matrices(R, n, max(samples, R.size), rng):
            if x.is_zero():
                continue
            try:
                w = subordinate(x, x, Budget(budget or 10**7))
            except BudgetExceeded:
                inconclusive += 1
                continue
            if w is None:
                return ClassVerdict(Status.FAILS, n, (x,), {"conclusive": True})
    return ClassVerdict(Status.HOLDS_UP_TO_BOUND, B, metadata={"inconclusive": inconclusive})


# ---------------------------------------------------------------- dense

def _candidate_interpolants(x: RingMatrix, y: RingMatrix, k: int, budget: Budget):
    """Distinct z = s.y.t of size k x k (all of them are subordinate to y)."""
    R = y.ring
    m, q = y.shape
    count = R.size ** (k * m + q * k)
    budget.charge(count * k * k * (m + q))
    S = enumerate_matrices(R, k, m)
    T = enumerate_matrices(R, q, k)
    SY = matmul_arrays(R, S, y.array[None])
    seen = {}
    for sy in np.unique(SY, axis=0):
        Z = matmul_arrays(R, sy[None], T)
        for z in np.unique(Z.reshape(len(T), -1), axis=0):
            seen.setdefault(tuple(int(v) for v in z), None)
    return [RingMatrix(R, k, k, key) for key in sorted(seen)]


def find_interpolant(x: RingMatrix, y: RingMatrix, max_size: int, budget=None):
    """z with x below z below y, searched among z of size <= max_size."""
    budget = budget if isinstance(budget, Budget) else Budget(budget or 10**8)
    for z in (x, y):
        w1 = subordinate(x, z, budget)
        if w1 is not None:
            w2 = subordinate(z, y, budget)
            if w2 is not None:
                return z, w1, w2
    for k in range(1, max_size + 1):
        for z in _candidate_interpolants(x, y, k, budget):
            w1 = subordinate(x, z, budget)
            if w1 is not None:
                return z, w1, subordinate(z, y, budget)
    return None


def is_dense(R: FiniteRing, B: int = 2, budget=None, samples: int = 32, seed: int = 0) -> ClassVerdict:
    """Interpolation for the subordination relation, up to bound B."""
    if R.unit is not None:
        return ClassVerdict(Status.HOLDS, B, metadata={"reason": "unital: the relation is reflexive"})
    if is_idempotent_ring(R):
        return ClassVerdict(Status.HOLDS, B, metadata={"reason": "R^2 = R"})
    if _span_of_products(R, 3) == [R.zero]:
        return ClassVerdict(Status.HOLDS, B, metadata={"reason": "R^3 = 0: only 0 is subordinate, interpolant 0"})
    rng = np.random.default_rng(seed)
    inconclusive = 0
    pairs = []
    for xi in range(R.size):
        for yi in range(R.size):
            if xi != R.zero:
                pairs.append((RingMatrix.of(R, xi), RingMatrix.of(R, yi)))
    for n in range(2, B + 1):
        for _ in range(samples):
            s, y, t = (RingMatrix.from_array(R, rng.integers(0, R.size, size=(n, n))) for _ in range(3))
            x = s @ y @ t
            if not x.is_zero():
                pairs.append((x, y))
    for x, y in pairs:
        try:
            if subordinate(x, y) is None:
                continue
            found = find_interpolant(x, y, B + 1)
        except BudgetExceeded:
            inconclusive += 1
            continue
        if found is None:
            return ClassVerdict(Status.FAILS, B, (x, y),
                                {"conclusive": False, "FailsUpToBound": B + 1,
                                 "note": "no interpolant among matrices of the searched sizes"})
    return ClassVerdict(Status.HOLDS_UP_TO_BOUND, B, metadata={"inconclusive": inconclusive})


# ---------------------------------------------------------------- left normal

class _MatrixSpace:
    """All of M_n(R) as one array, with cached idempotents."""

    def __init__(self, R: FiniteRing, n: int):
        self.R, self.n = R, n
        self.all = enumerate_matrices(R, n, n)
        sq = matmul_arrays(R, self.all, self.all)
        self.idempotents = self.all[(sq == self.all).all(axis=(1, 2))]

    def fixed_left(self, c: np.ndarray) -> np.ndarray:
        """{e : c e = e}"""
        return self.all[(matmul_arrays(self.R, c[None], self.all) == self.all).all(axis=(1, 2))]


_spaces: dict = {}


def matrix_space(R: FiniteRing, n: int):
    if R.size ** (n * n) > ENUMERABLE:
        return None
    key = (R.meta, n)
    if key not in _spaces:
        _spaces[key] = _MatrixSpace(R, n)
    return _spaces[key]


def left_normal_witness(a: RingMatrix, b: RingMatrix, c: RingMatrix, budget=None):
    """(d, e) with a = d a, d = e d, e = c e, or None if none of size n exists."""
    R = a.ring
    n = max(a.rows, a.cols, b.rows, c.rows)
    A, Bm, C = (m.square().padded(n, n).array for m in (a, b, c))
    budget = budget if isinstance(budget, Budget) else Budget(budget or 10**8)
    space = matrix_space(R, n)
    if space is None:
        cands = [Bm, C, matmul_arrays(R, C, Bm), matmul_arrays(R, Bm, C), A]
        for d in cands:
            for e in cands:
                if (np.array_equal(matmul_arrays(R, d, A), A) and np.array_equal(matmul_arrays(R, e, d), d)
                        and np.array_equal(matmul_arrays(R, C, e), e)):
                    return RingMatrix.from_array(R, d), RingMatrix.from_array(R, e)
        raise BudgetExceeded(f"M_{n}({R.meta}) too large to search")
    idem = space.idempotents
    ok = (matmul_arrays(R, idem, A[None]) == A).all(axis=(1, 2)) & \
         (matmul_arrays(R, C[None], idem) == idem).all(axis=(1, 2))
    if ok.any():
        e = idem[int(np.argmax(ok))]
        return RingMatrix.from_array(R, e), RingMatrix.from_array(R, e)
    D = space.all[(matmul_arrays(R, space.all, A[None]) == A).all(axis=(1, 2))]
    E = space.fixed_left(C)
    budget.charge(len(D) * len(E) * n ** 3)
    for d in D:
        hit = (matmul_arrays(R, E, d[None]) == d).all(axis=(1, 2))
        if hit.any():
            return RingMatrix.from_array(R, d), RingMatrix.from_array(R, E[int(np.argmax(hit))])
    return None


def _left_normal_triples(R: FiniteRing, n: int, samples: int, rng):
    space = matrix_space(R, n)
    if space is None:
        return None
    Ms = space.all
    if len(Ms) <= EXHAUSTIVE_TRIPLES:
        for c in Ms:
            for b in space.fixed_left(c):
                for a in space.fixed_left(b):
                    yield a, b, c
        return
    for _ in range(samples):
        c = Ms[rng.integers(len(Ms))]
        Bs = space.fixed_left(c)
        b = Bs[rng.integers(len(Bs))]
        As = space.fixed_left(b)
        a = As[rng.integers(len(As))]
        yield a, b, c


def is_left_normal(R: FiniteRing, B: int = 2, budget=None, samples: int = 48, seed: int = 0) -> ClassVerdict:
    """Search d, e for triples a = b a, b = c b with sizes up to B."""
    rng = np.random.default_rng(seed)
    checked, skipped = 0, []
    for n in range(1, B + 1):
        triples = _left_normal_triples(R, n, samples, rng)
        if triples is None:
            skipped.append(n)
            continue
        for a, b, c in triples:
            ma, mb, mc = (RingMatrix.from_array(R, v) for v in (a, b, c))
            try:
                w = left_normal_witness(ma, mb, mc, budget)
            except BudgetExceeded:
                skipped.append(n)
                continue
            checked += 1
            if w is None:
                return ClassVerdict(Status.FAILS, B, (ma, mb, mc),
                                    {"conclusive": False, "FailsUpToBound": n})
    return ClassVerdict(Status.HOLDS_UP_TO_BOUND, B,
                        metadata={"triples_checked": checked, "sizes_skipped": sorted(set(skipped))})


def normal_chain(a: RingMatrix, b: RingMatrix, c: RingMatrix, length: int, budget=None) -> list[RingMatrix]:
    """d_1..d_N with a = d_1 a, d_n = d_{n+1} d_n and d_n = c d_n.

    Each step feeds (d_n, e_n, c) back in as the next (a, b, c).
    """
    R = a.ring
    n = max(a.rows, a.cols, b.rows, c.rows)
    a, b, c = (m.square().padded(n, n) for m in (a, b, c))
    if not ((b @ a).same_element(a) and (c @ b).same_element(b)):
        raise WitnessNotFound("normal_chain needs a = b a and b = c b")
    chain = []
    cur_a, cur_b = a, b
    for _ in range(length):
        w = left_normal_witness(cur_a, cur_b, c, budget)
        if w is None:
            raise WitnessNotFound(f"no left-normal witness at step {len(chain) + 1} over {R.meta}")
        d, e = w
        chain.append(d)
        cur_a, cur_b = d, e
    return chain


def check_normal_chain(a: RingMatrix, c: RingMatrix, chain) -> bool:
    n = chain[0].rows
    a, c = a.square().padded(n, n), c.square().padded(n, n)
    if not (chain[0] @ a).same_element(a):
        return False
    for k, d in enumerate(chain):
        if not (c @ d).same_element(d):
            return False
        if k + 1 < len(chain) and not (chain[k + 1] @ d).same_element(d):
            return False
    return True
