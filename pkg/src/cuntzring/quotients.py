"""Lifting subordination through R -> R/I and the block lift of S-chains."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chains import check_s_witnesses, quasipure_chain
from .errors import (BudgetExceeded, DecompositionWitnessNotFound, HypothesisFailed,
                     NotAChain, TailInadmissible)
from .ideals import Ideal, is_decomposable
from .matrices import (Budget, RingMatrix, SubordinationWitness, block, direct_sum,
                       enumerate_matrices, subordinate)
from .rings import FiniteRing, quotient_ring


@dataclass
class LiftCertificate:
    x: RingMatrix
    y: RingMatrix
    z: RingMatrix
    witness: SubordinationWitness
    route: str

    def verify(self, I: Ideal | None = None) -> bool:
        if I is not None and not self.z.entries_in(I.elements):
            return False
        return self.witness.verify(self.x, direct_sum(self.y, self.z))

    def to_json(self):
        return {"x": self.x.to_json(), "y": self.y.to_json(), "z": self.z.to_json(),
                "witness": self.witness.to_json(), "route": self.route}


@dataclass
class BlockLiftStage:
    stage: int
    X: RingMatrix
    Y: RingMatrix | None   # Y_{n+1}; None at the last stage

    def to_json(self):
        return {"stage": self.stage, "X": self.X.to_json(),
                "Y": None if self.Y is None else self.Y.to_json()}


class Projection:
    """pi: R -> R/I on matrices, with minimal coset representatives as lifts."""

    def __init__(self, R: FiniteRing, I: Ideal):
        self.R, self.I = R, I
        self.Q, self.morphism = quotient_ring(R, I.elements)
        f = self.morphism.map
        self.lift_table = np.array([int(np.argmax(f == q)) for q in range(self.Q.size)], dtype=np.int64)

    def __call__(self, x: RingMatrix) -> RingMatrix:
        return RingMatrix.from_array(self.Q, self.morphism.map[x.array])

    def lift(self, xq: RingMatrix) -> RingMatrix:
        return RingMatrix.from_array(self.R, self.lift_table[xq.array])


_projections: dict = {}


def projection(I: Ideal) -> Projection:
    key = (I.ring.meta, I.elements)
    if key not in _projections:
        _projections[key] = Projection(I.ring, I)
    return _projections[key]


# ---------------------------------------------------------------- decomposability witnesses

_triples: dict = {}


def _triple_sums(I: Ideal) -> dict:
    """Each element of span(R I R) as a shortest list of products r.b.s, b in I."""
    key = (I.ring.meta, I.elements)
    if key in _triples:
        return _triples[key]
    R = I.ring
    gens = {}
    for b in I.elements:
        for r in range(R.size):
            rb = int(R.mul[r, b])
            for s in range(R.size):
                gens.setdefault(int(R.mul[rb, s]), (r, b, s))
    gens.pop(R.zero, None)
    reach = {R.zero: ()}
    frontier = [R.zero]
    while frontier:
        nxt = []
        for e in frontier:
            for g, t in gens.items():
                f = int(R.add[e, g])
                if f not in reach:
                    reach[f] = reach[e] + (t,)
                    nxt.append(f)
        frontier = nxt
    _triples[key] = reach
    return reach


def decomposable_witness(I: Ideal, zp: RingMatrix, budget=None):
    """z over I and a witness for zp below z.

    Tries zp itself first; otherwise writes every entry as a sum of products
    r.b.s with b in I and puts all the b's on a diagonal.
    """
    R = I.ring
    if zp.is_zero():
        z = RingMatrix.zeros(R, 1, 1)
        return z, SubordinationWitness(RingMatrix.zeros(R, zp.rows, 1), RingMatrix.zeros(R, 1, zp.cols))
    try:
        w = subordinate(zp, zp, budget if budget is not None else 10**6)
    except BudgetExceeded:
        w = None
    if w is not None:
        return zp, w
    sums = _triple_sums(I)
    terms = []
    for i in range(zp.rows):
        for j in range(zp.cols):
            e = zp[i, j]
            if e not in sums:
                raise DecompositionWitnessNotFound(
                    f"{R.labels[e]} is not in span(R I R) for I = {I.name()}")
            terms += [(i, j, t) for t in sums[e]]
    k = len(terms)
    S = np.full((zp.rows, k), R.zero, dtype=np.int64)
    T = np.full((k, zp.cols), R.zero, dtype=np.int64)
    diag = np.full((k, k), R.zero, dtype=np.int64)
    for p, (i, j, (r, b, s)) in enumerate(terms):
        S[i, p], diag[p, p], T[p, j] = r, b, s
    z = RingMatrix.from_array(R, diag)
    w = SubordinationWitness(RingMatrix.from_array(R, S), RingMatrix.from_array(R, T))
    assert w.verify(zp, z)
    return z, w


# ---------------------------------------------------------------- the lifting lemma

def lift_subordination(R: FiniteRing, I: Ideal, x: RingMatrix, y: RingMatrix,
                       budget=None, shortcut: bool = True) -> LiftCertificate:
    """z over I with x below y (+) z, given pi(x) below pi(y).

    Route: write x = a y b + z' with a, b lifted from a quotient witness,
    then bound z' by some z over I.  With `shortcut`, a direct witness for
    x below y is tried first and gives z = 0.
    """
    if not is_decomposable(I).value:
        raise HypothesisFailed(f"{I.name()} is not decomposable in {R.meta}")
    budget = budget if isinstance(budget, Budget) else Budget(budget or 10**8)
    pi = projection(I)
    wq = subordinate(pi(x), pi(y), budget)
    if wq is None:
        raise HypothesisFailed(f"pi({x}) is not subordinate to pi({y})")
    zero = RingMatrix.zeros(R, 1, 1)
    if shortcut:
        w = subordinate(x, y, budget)
        if w is not None:
            S = block(R, [[w.left, RingMatrix.zeros(R, x.rows, 1)]])
            T = block(R, [[w.right], [RingMatrix.zeros(R, 1, x.cols)]])
            cert = LiftCertificate(x, y, zero, SubordinationWitness(S, T), "direct")
            assert cert.verify(I)
            return cert
    a, b = pi.lift(wq.left), pi.lift(wq.right)
    zp = x - a @ y @ b
    if not zp.entries_in(I.elements):
        raise HypothesisFailed("x - a y b has entries outside I")
    z, wz = decomposable_witness(I, zp, budget)
    S = block(R, [[a, wz.left]])
    T = block(R, [[b], [wz.right]])
    cert = LiftCertificate(x, y, z, SubordinationWitness(S, T), "lifted" if zp.is_zero() else "decomposed")
    if not cert.verify(I):
        raise DecompositionWitnessNotFound("assembled lift certificate does not verify")
    return cert


def cumulative_blocks(I: Ideal, first: list, stages: int, budget=None):
    """w_n = z_{1,n} (+) ... (+) z_{n,n} from z_{k,1} = first[k-1].

    Each column z_{k,m} is continued by z_{k,m} below z_{k,m+1}; returns the
    w's together with the witnesses for w_n below w_{n+1}.
    """
    cols = [[z] for z in first[:stages]]
    links = [[] for _ in cols]
    for k, col in enumerate(cols):
        for _ in range(stages - 1 - k):
            nxt, w = decomposable_witness(I, col[-1], budget)
            col.append(nxt)
            links[k].append(w)
    ws = [direct_sum(*[cols[k][n - k] for k in range(n + 1)]) for n in range(stages)]
    proofs = []
    R = I.ring
    for n in range(stages - 1):
        parts = [links[k][n - k] for k in range(n + 1)]
        new = cols[n + 1][0]
        S = block(R, [[direct_sum(*[p.left for p in parts]), RingMatrix.zeros(R, ws[n].rows, new.rows)]])
        T = block(R, [[direct_sum(*[p.right for p in parts])], [RingMatrix.zeros(R, new.cols, ws[n].cols)]])
        w = SubordinationWitness(S, T)
        proofs.append(w if w.verify(ws[n], ws[n + 1]) else None)
    return ws, proofs


# ---------------------------------------------------------------- block lift

def _pad(m, D):
    return None if m is None else m.square().padded(D, D)


def block_lift(stages, qp_chains) -> list[BlockLiftStage]:
    """Assemble X_n and Y_{n+1} and check Y_{n+1} X_{n+1} X_n = X_n.

    stages[n-1] = {"x": x_n, "y": y_{n+1} (unused at the last stage), "r": r_n}
    qp_chains[n-1] = certified chain s_{1,n}, s_{2,n}, ... with witnesses
    y_{m+1,n}.  Hypotheses: y_{n+1} x_{n+1} x_n + r_n s_{1,n} = x_n.
    X_n has block rows (x_n | 0), (0 | diag(s_{n,1}, ..., s_{2,n-1})) and
    (s_{1,n} | 0); Y_{n+1} has y_{n+1} and r_n y_{2,n} in its first row,
    diag(y_{n+1,1}, ..., y_{3,n-1}) and y_{2,n} in the last row.
    """
    N = len(stages)
    if N == 0:
        return []
    if len(qp_chains) < N:
        raise HypothesisFailed("one quasipure chain per stage is needed")
    R = stages[0]["x"].ring
    mats = [st[k] for st in stages for k in ("x", "y", "r") if st.get(k) is not None]
    mats += [t for c in qp_chains[:N] for t in c.terms + (c.s_witnesses or [])]
    D = max(max(m.rows, m.cols) for m in mats)
    xs = [_pad(st["x"], D) for st in stages]
    ys = [_pad(st.get("y"), D) for st in stages]
    rs = [_pad(st.get("r"), D) for st in stages]

    def s(m, k):   # s_{m,k}, 1-based
        return _pad(qp_chains[k - 1].term(m - 1), D)

    def yy(m, k):  # y_{m,k} with s_{m-1,k} = y_{m,k} s_{m,k} s_{m-1,k}
        return _pad(qp_chains[k - 1].witness(m - 2), D)

    for k, c in enumerate(qp_chains[:N], start=1):
        if not check_s_witnesses(c):
            raise HypothesisFailed(f"chain for stage {k} is not S-certified")
    for n in range(1, N):
        lhs = ys[n - 1] @ xs[n] @ xs[n - 1] + rs[n - 1] @ s(1, n)
        if not lhs.same_element(xs[n - 1]):
            raise HypothesisFailed(f"y_{n + 1} x_{n + 1} x_{n} + r_{n} s_(1,{n}) != x_{n}")

    def X(n):
        grid = [[None] * n for _ in range(n + 1)]
        grid[0][0] = xs[n - 1]
        for k in range(1, n):
            grid[k][k] = s(n + 1 - k, k)
        grid[n][0] = s(1, n)
        return _block(R, grid, D)

    def Y(n1):     # Y_{n+1} with n = n1 - 1
        n = n1 - 1
        grid = [[None] * (n + 2) for _ in range(n + 1)]
        grid[0][0] = ys[n - 1]
        grid[0][n] = rs[n - 1] @ yy(2, n)
        for k in range(1, n):
            grid[k][k] = yy(n + 2 - k, k)
        grid[n][n] = yy(2, n)
        return _block(R, grid, D)

    Xs = [X(n) for n in range(1, N + 1)]
    out = []
    for n in range(1, N + 1):
        Yn = Y(n + 1) if n < N else None
        if Yn is not None and not (Yn @ Xs[n] @ Xs[n - 1]).same_element(Xs[n - 1]):
            raise HypothesisFailed(f"Y_{n + 1} X_{n + 1} X_{n} != X_{n}")
        out.append(BlockLiftStage(n, Xs[n - 1], Yn))
    return out


def _block(R, grid, D):
    z = RingMatrix.zeros(R, D, D)
    return block(R, [[z if b is None else b for b in row] for row in grid])


def check_block_stages(stages) -> bool:
    return all((a.Y @ b.X @ a.X).same_element(a.X) for a, b in zip(stages, stages[1:]))


def simulate_block_inputs(R: FiniteRing, I: Ideal, n_stages: int, rng, dim: int = 1,
                          max_tries: int = 100_000):
    """Random inputs satisfying the block-lift hypotheses (rejection sampling).

    Draw x_n and y_{n+1} over R, keep them when z_n = x_n - y_{n+1} x_{n+1} x_n
    lies in M(I), and factor z_n = r_n s_{1,n} through a quasipure chain.
    Needs a unital R so that the chain anchor gives z_n = r_n s_{1,n} exactly.
    """
    if R.unit is None:
        raise HypothesisFailed("forward simulation needs a unital ring")
    rand = lambda: RingMatrix.from_array(R, rng.integers(0, R.size, size=(dim, dim)))
    member = np.zeros(R.size, dtype=bool)
    member[list(I.elements)] = True
    for _ in range(max_tries):
        xs = [rand() for _ in range(n_stages)]
        ys = [rand() for _ in range(n_stages)]
        zs = [xs[n] - ys[n] @ xs[n + 1] @ xs[n] for n in range(n_stages - 1)]
        if all(member[z.array].all() for z in zs):
            break
    else:
        raise HypothesisFailed("rejection sampling found no admissible input")
    last = RingMatrix.from_array(R, rng.choice(np.asarray(I.elements), size=(dim, dim)))
    zs.append(last)
    stages, chains = [], []
    for n in range(n_stages):
        c = quasipure_chain(I, zs[n])
        z, w = c.notes["anchor"]
        # the anchor of a unital ring has the form z = r s_1 . 1
        if z.is_zero():
            r = RingMatrix.zeros(R, dim, dim)
        elif w.right.same_element(RingMatrix.identity(R, w.right.rows)):
            r = w.left
        else:
            raise HypothesisFailed("anchor witness is not one-sided")
        stages.append({"x": xs[n], "y": ys[n] if n + 1 < n_stages else None, "r": r})
        chains.append(c)
    return stages, chains


# ---------------------------------------------------------------- transfer report

@dataclass
class TransferReport:
    ring: str
    ideal: str
    counts: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    inconclusive: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self):
        return {"ring": self.ring, "ideal": self.ideal, "counts": self.counts,
                "violations": self.violations, "inconclusive": self.inconclusive}


def _pairs(R: FiniteRing, samples: int, rng):
    for a in range(R.size):
        for b in range(R.size):
            yield RingMatrix.of(R, a), RingMatrix.of(R, b)
    total = R.size ** 4
    if total * total <= samples:
        mats = enumerate_matrices(R, 2, 2)
        for a in mats:
            for b in mats:
                yield RingMatrix.from_array(R, a), RingMatrix.from_array(R, b)
        return
    for _ in range(samples):
        yield (RingMatrix.from_array(R, rng.integers(0, R.size, size=(2, 2))),
               RingMatrix.from_array(R, rng.integers(0, R.size, size=(2, 2))))


def _quotient_chains(Q: FiniteRing, samples: int, rng):
    """Chains q1 below q2 below q3 in R/I built as q_k = s q_{k+1} t."""
    for _ in range(samples):
        n = int(rng.integers(1, 3))
        rnd = lambda: RingMatrix.from_array(Q, rng.integers(0, Q.size, size=(n, n)))
        q3 = rnd()
        q2 = rnd() @ q3 @ rnd()
        q1 = rnd() @ q2 @ rnd()
        yield [q1, q2, q3]


def transfer_report(R: FiniteRing, I: Ideal, samples: int = 64, seed: int = 0, budget=None) -> TransferReport:
    """Bounded checks of the quotient theorem's constructive ingredients.

    `inconclusive` counts screening searches (is x below y, is pi(x) below
    pi(y)) that ran out of budget; counts["lift_inconclusive"] counts lifts
    that did.

    (a) pi preserves subordination, (b) chains in R/I lift by iterating the
    lifting lemma, (c) pi(x) below pi(y) gives x below y (+) w with w over I,
    and the cumulative blocks w_n are increasing.
    """
    rng = np.random.default_rng(seed)
    pi = projection(I)
    rep = TransferReport(R.meta, I.name(), {"a": 0, "b": 0, "c": 0, "cumulative": 0, "lift_inconclusive": 0})

    def search(x, y):
        try:
            return subordinate(x, y, Budget(budget or 10**7))
        except BudgetExceeded:
            rep.inconclusive += 1
            return "skip"

    for x, y in _pairs(R, samples, rng):
        w = search(x, y)
        if w == "skip":
            continue
        if w is not None:
            rep.counts["a"] += 1
            wq = SubordinationWitness(pi(w.left), pi(w.right))
            if not wq.verify(pi(x), pi(y)):
                rep.violations.append({"check": "a", "x": x.to_json(), "y": y.to_json()})
        wq = search(pi(x), pi(y))
        if wq is None or wq == "skip":
            continue
        rep.counts["c"] += 1
        try:
            cert = lift_subordination(R, I, x, y, budget, shortcut=False)
            if not cert.verify(I):
                raise DecompositionWitnessNotFound("certificate does not replay")
        except BudgetExceeded:
            rep.counts["lift_inconclusive"] += 1
        except (HypothesisFailed, DecompositionWitnessNotFound) as e:
            rep.violations.append({"check": "c", "x": x.to_json(), "y": y.to_json(), "error": str(e)})

    for qs in _quotient_chains(pi.Q, samples, rng):
        rep.counts["b"] += 1
        xs = [pi.lift(q) for q in qs]
        try:
            cur, lifted, zs = xs[0], [xs[0]], []
            for nxt in xs[1:]:
                cert = lift_subordination(R, I, cur, nxt, budget, shortcut=False)
                if not cert.verify(I):
                    raise NotAChain("lifted chain link fails", index=len(zs))
                zs.append(cert.z)
                cur = direct_sum(nxt, cert.z)
                lifted.append(cur)
            if not all(pi(l).same_element(q) for l, q in zip(lifted, qs)):
                raise HypothesisFailed("lifted chain does not project back")
            ws, proofs = cumulative_blocks(I, zs, len(zs), budget)
            rep.counts["cumulative"] += 1
            if any(p is None for p in proofs):
                raise NotAChain("cumulative blocks are not increasing", index=0)
        except BudgetExceeded:
            rep.counts["lift_inconclusive"] += 1
        except (HypothesisFailed, DecompositionWitnessNotFound, NotAChain, TailInadmissible) as e:
            rep.violations.append({"check": "b", "chain": [q.to_json() for q in qs], "error": str(e)})
    return rep


def decomposable_ideals(R: FiniteRing):
    from .ideals import enumerate_ideals
    return [I for I in enumerate_ideals(R) if is_decomposable(I).value]
