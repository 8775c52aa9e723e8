"""Ideal lattices of finite rings and the ideal classes.

Classes handled here: pure, idempotent, decomposable and quasipure ideals,
the stable power I^oo, the meets and joins of the decomposable and quasipure
lattices, the retract between them, and trace ideals of idempotent matrices.
Scalar criteria (span(R I R) and I^2) are paired with bounded searches that
work from the matrix-level definitions, so the two can be cross-checked.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .classes import matrix_space
from .errors import (BudgetExceeded, ClassPreconditionFailed, CrossValidationError,
                     FgSearchUnsupported, NotIdempotent, SizeLimitExceeded)
from .matrices import Budget, RingMatrix, matmul_arrays, subordinate, two_sided_span
from .rings import MAX_RING_SIZE, FiniteRing, additive_closure, ideal_closure

SIDES = {"two-sided": "two", "left": "left", "right": "right"}


@dataclass(frozen=True, eq=False)
class Ideal:
    ring: FiniteRing = field(repr=False)
    elements: tuple
    sidedness: str = "two-sided"

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring.same_as(other.ring) and self.elements == other.elements

    def __hash__(self):
        return hash((self.ring.meta, self.elements))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self._set

    def __le__(self, other):
        return self._set <= other._set

    @property
    def _set(self):
        s = self.__dict__.get("_s")
        if s is None:
            s = frozenset(self.elements)
            object.__setattr__(self, "_s", s)
        return s

    @property
    def size(self) -> int:
        return len(self.elements)

    def labels(self):
        return [self.ring.labels[e] for e in self.elements]

    def name(self) -> str:
        return "{" + ",".join(self.labels()) + "}"

    def to_json(self):
        return {"elements": list(self.elements), "labels": self.labels(), "sidedness": self.sidedness}

    def __str__(self):
        return self.name()


def make_ideal(R: FiniteRing, elements, sidedness: str = "two-sided") -> Ideal:
    return Ideal(R, tuple(sorted(set(int(e) for e in elements))), sidedness)


def generated_ideal(R: FiniteRing, gens, sidedness: str = "two-sided") -> Ideal:
    gens = [R.index_of(g) for g in gens]
    return make_ideal(R, ideal_closure(R, gens, SIDES[sidedness]), sidedness)


def zero_ideal(R: FiniteRing) -> Ideal:
    return make_ideal(R, [R.zero])


def whole(R: FiniteRing) -> Ideal:
    return make_ideal(R, range(R.size))


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    R = I.ring
    s = np.unique(R.add[np.asarray(I.elements)][:, np.asarray(J.elements)])
    return Ideal(R, tuple(int(v) for v in s), I.sidedness)


def ideal_meet(I: Ideal, J: Ideal) -> Ideal:
    return make_ideal(I.ring, I._set & J._set, I.sidedness)


def product_span(R: FiniteRing, A, B) -> list[int]:
    """Additive span of {a b : a in A, b in B}."""
    prods = np.unique(R.mul[np.asarray(list(A))][:, np.asarray(list(B))])
    return additive_closure(R, prods.tolist())


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    return make_ideal(I.ring, product_span(I.ring, I.elements, J.elements))


def enumerate_ideals(R: FiniteRing, sidedness: str = "two-sided") -> list[Ideal]:
    """All ideals of the given sidedness: principal ones, then sums to a fixpoint."""
    if R.size > MAX_RING_SIZE:
        raise SizeLimitExceeded(f"{R.meta}")
    side = SIDES[sidedness]
    found = {}
    for x in range(R.size):
        el = tuple(ideal_closure(R, [x], side))
        found.setdefault(el, None)
    frontier = list(found)
    while frontier:
        new = []
        keys = list(found)
        for a in frontier:
            A = np.asarray(a)
            for b in keys:
                s = tuple(int(v) for v in np.unique(R.add[A][:, np.asarray(b)]))
                if s not in found:
                    found[s] = None
                    new.append(s)
        frontier = new
    ordered = sorted(found, key=lambda e: (len(e), e))
    return [Ideal(R, e, sidedness) for e in ordered]


# ---------------------------------------------------------------- simple predicates

@dataclass
class Decision:
    """A yes / no / unknown answer with the evidence behind it."""
    value: bool | None
    mode: str
    evidence: dict = field(default_factory=dict)

    def __bool__(self):
        if self.value is None:
            raise ValueError(f"{self.mode} verdict is Unknown")
        return self.value

    @property
    def conclusive(self) -> bool:
        return self.value is not None and self.evidence.get("conclusive", True)


def is_pure(I: Ideal) -> bool:
    """Every y in I has some s in I with s y = y."""
    return pure_witnesses(I) is not None


def pure_witnesses(I: Ideal):
    """Map y -> s with s y = y, or None if some y has no such s."""
    R = I.ring
    el = np.asarray(I.elements)
    M = R.mul[el][:, el]            # M[i, j] = el[i] * el[j]
    fixes = M == el[None, :]
    if not fixes.any(axis=0).all():
        return None
    return {int(el[j]): int(el[int(np.argmax(fixes[:, j]))]) for j in range(len(el))}


def is_idempotent(I: Ideal) -> bool:
    return len(product_span(I.ring, I.elements, I.elements)) == len(I.elements)


def stable_power(I: Ideal) -> Ideal:
    """I^n for n large: iterate I^(n+1) = span(I^n . I) until it stops shrinking."""
    R = I.ring
    cur = list(I.elements)
    while True:
        nxt = product_span(R, cur, I.elements)
        if len(nxt) == len(cur):
            return make_ideal(R, cur)
        cur = nxt


def powers(I: Ideal) -> list[Ideal]:
    out = [I]
    while True:
        nxt = make_ideal(I.ring, product_span(I.ring, out[-1].elements, I.elements))
        if nxt == out[-1]:
            return out
        out.append(nxt)


def decomposable_span(I: Ideal) -> list[int]:
    return two_sided_span(I.ring, I.elements)


# ---------------------------------------------------------------- bounded oracles

def _search(x: RingMatrix, y: RingMatrix, total: Budget, per_call: int = 2 * 10**6):
    """subordinate() with an identity shortcut for y = x over unital rings.

    The shortcut is verified by multiplication; the search proper draws on a
    budget shared by all candidates tried for one x.
    """
    R = x.ring
    if R.unit is not None and x == y:
        e = RingMatrix.identity(R, x.rows), RingMatrix.identity(R, x.cols)
        if (e[0] @ y @ e[1]).same_element(x):
            return e
    room = min(per_call, total.limit - total.used)
    if room <= 0:
        raise BudgetExceeded("oracle budget spent")
    b = Budget(room)
    try:
        w = subordinate(x, y, b)
    finally:
        total.used += b.used
    return None if w is None else (w.left, w.right)


def _test_matrices(I: Ideal, n: int, samples: int, rng) -> list[RingMatrix]:
    R = I.ring
    el = np.asarray(I.elements)
    total = len(el) ** (n * n)
    if total <= max(samples, 256):
        idx = itertools.product(range(len(el)), repeat=n * n)
        return [RingMatrix.from_array(R, el[list(c)].reshape(n, n)) for c in idx]
    return [RingMatrix.from_array(R, el[rng.integers(0, len(el), size=(n, n))]) for _ in range(samples)]


def scalar_reach(I: Ideal, k: int):
    """{s.y.t : s in R^(1 x k), y in M_k(I), t in R^(k x 1)} straight from the definition.

    For fixed s, t the values form the subgroup generated by the sets s_i I t_j.
    Returns the set, or None when the enumeration is too large.
    """
    R = I.ring
    if R.size ** (2 * k) > 200_000 or R.size ** 2 * len(I) > 4_000_000:
        return None
    el = np.asarray(I.elements)
    # H[a, b] = {a y b : y in I}
    H = R.mul[R.mul[:, el][:, None, :], np.arange(R.size)[None, :, None]]  # a, b, y
    groups = {}
    gid = np.empty((R.size, R.size), dtype=np.int64)
    for a in range(R.size):
        for b in range(R.size):
            key = frozenset(H[a, b].tolist())
            gid[a, b] = groups.setdefault(key, len(groups))
    members = list(groups)
    reach = set()
    sums = {}
    for s in itertools.product(range(R.size), repeat=k):
        for t in itertools.product(range(R.size), repeat=k):
            key = tuple(sorted({int(gid[a, b]) for a in s for b in t}))
            if key not in sums:
                gens = set().union(*(members[g] for g in key))
                sums[key] = frozenset(additive_closure(R, gens))
                reach |= sums[key]
    return reach


def _closed(R: FiniteRing, S) -> bool:
    arr = np.asarray(sorted(S))
    return set(np.unique(R.add[arr][:, arr]).tolist()) <= set(S)


def decomposable_oracle(I: Ideal, n_max: int = 2, k_max: int = 3, samples: int = 24,
                        seed: int = 0, budget: int = 10**7) -> Decision:
    """Search the definition directly: each x over I below some y over I."""
    R = I.ring
    rng = np.random.default_rng(seed)
    closed_reach = None
    for k in range(1, k_max + 1):
        reach = scalar_reach(I, k)
        if reach is None:
            break
        if _closed(R, reach):
            closed_reach = reach
            break
    el = list(I.elements)
    candidates = [RingMatrix.of(R, b) for b in el if b != R.zero]
    if len(el) ** 2 <= 256:
        candidates += [RingMatrix.from_array(R, np.diag([a, b])) for a in el for b in el
                       if a != R.zero and b != R.zero]
    positives, negatives, unknown = 0, [], []
    for n in range(1, n_max + 1):
        for x in _test_matrices(I, n, samples, rng):
            if x.is_zero():
                positives += 1
                continue
            if closed_reach is not None and any(e not in closed_reach for e in x.entries):
                negatives.append(x)
                continue
            hit = None
            total = Budget(budget)
            for y in [x] + _ordered(candidates, x.rows):
                try:
                    if _search(x, y, total) is not None:
                        hit = y
                        break
                except BudgetExceeded:
                    continue
            if hit is None:
                unknown.append(x)
            else:
                positives += 1
    ev = {"positives": positives, "negatives": [m.to_json() for m in negatives[:4]],
          "unknown": len(unknown), "scalar_reach_closed": closed_reach is not None}
    if negatives:
        return Decision(False, "oracle", ev)
    if unknown:
        return Decision(None, "oracle", ev)
    return Decision(True, "oracle", ev)


def is_decomposable(I: Ideal, mode: str = "criterion", **oracle_args) -> Decision:
    """Decomposability by the span criterion, the bounded oracle, or both."""
    if mode not in ("criterion", "oracle", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    crit = None
    if mode in ("criterion", "both"):
        D = decomposable_span(I)
        crit = Decision(set(I.elements) <= set(D), "criterion", {"span_RIR": D})
        if mode == "criterion":
            return crit
    orc = decomposable_oracle(I, **oracle_args)
    if mode == "oracle":
        return orc
    if orc.value is not None and orc.value != crit.value:
        raise CrossValidationError(f"decomposability of {I} in {I.ring.meta}: criterion {crit.value}, oracle {orc.value}")
    return Decision(crit.value, "both", {"criterion": crit.evidence, "oracle": orc.evidence,
                                         "oracle_value": orc.value})


def _fixed_candidates(I: Ideal, limit: int = 4096):
    """Matrices y over I with s y = y for some s over I, small ones first."""
    R = I.ring
    el = np.asarray(I.elements)
    pw = pure_witnesses_partial(I)
    out = [RingMatrix.of(R, int(y)) for y in el if y != R.zero and int(y) in pw]
    if len(el) ** 4 <= limit:
        Y = el[np.asarray(list(itertools.product(range(len(el)), repeat=4)))].reshape(-1, 2, 2)
        # y is fixed iff each row of y is an I-combination of the rows of y
        coeffs = el[np.asarray(list(itertools.product(range(len(el)), repeat=2)))]   # (|I|^2, 2)
        combos = matmul_arrays(R, coeffs[None, :, None, :], Y[:, None, :, :])[:, :, 0, :]  # (nY, nc, 2)
        ok = np.ones(len(Y), dtype=bool)
        for i in range(2):
            ok &= (combos == Y[:, None, i, :]).all(axis=2).any(axis=1)
        out += [RingMatrix.from_array(R, y) for y in Y[ok] if (y != R.zero).any()]
    return out


def _ordered(cands, n: int):
    """Candidates of the query's size first: repeated scalars, then the rest."""
    R = cands[0].ring if cands else None
    scal = [c for c in cands if c.rows == 1]
    reps = [RingMatrix.from_array(R, np.diag([c.entries[0]] * n)) for c in scal] if n > 1 else []
    return reps + [c for c in cands if c.rows == n] + [c for c in cands if c.rows != n]


def pure_witnesses_partial(I: Ideal) -> dict:
    R = I.ring
    el = np.asarray(I.elements)
    fixes = R.mul[el][:, el] == el[None, :]
    return {int(el[j]): int(el[int(np.argmax(fixes[:, j]))]) for j in range(len(el)) if fixes[:, j].any()}


def fixing_matrix(I: Ideal, y: RingMatrix):
    """Some s over I with s y = y (rows solved one at a time), or None."""
    R = I.ring
    el = np.asarray(I.elements)
    Y = y.array
    k = Y.shape[0]
    if len(el) ** k > 1 << 16:
        return None
    coeffs = el[np.asarray(list(itertools.product(range(len(el)), repeat=k)))]
    combos = matmul_arrays(R, coeffs[:, None, :], Y[None])[:, 0, :]
    rows = []
    for i in range(k):
        hit = (combos == Y[i][None, :]).all(axis=1)
        if not hit.any():
            return None
        rows.append(coeffs[int(np.argmax(hit))])
    return RingMatrix.from_array(R, np.stack(rows))


def quasipure_oracle(I: Ideal, n_max: int = 2, samples: int = 16, seed: int = 0,
                     budget: int = 10**7) -> Decision:
    """For x over I search y, s over I with s y = y and x below y."""
    R = I.ring
    rng = np.random.default_rng(seed)
    # entries of a fixed y = s y lie in span(I I), so x lies in span(R . I^2 . R)
    sq = product_span(R, I.elements, I.elements)
    reach = set(two_sided_span(R, sq))
    cands = _fixed_candidates(I)
    positives, negatives, unknown = 0, [], 0
    witness = None
    for n in range(1, n_max + 1):
        for x in _test_matrices(I, n, samples, rng):
            if x.is_zero():
                positives += 1
                continue
            if any(e not in reach for e in x.entries):
                negatives.append(x)
                continue
            hit = False
            total = Budget(budget)
            first = [x] if fixing_matrix(I, x.square()) is not None else []
            for y in first + _ordered(cands, x.rows):
                try:
                    w = _search(x, y, total)
                except BudgetExceeded:
                    continue
                if w is not None:
                    hit = True
                    if witness is None:
                        witness = {"x": x.to_json(), "y": y.square().to_json(),
                                   "s": fixing_matrix(I, y.square()).to_json(),
                                   "left": w[0].to_json(), "right": w[1].to_json()}
                    break
            positives += hit
            unknown += not hit
    ev = {"positives": positives, "negatives": [m.to_json() for m in negatives[:4]], "unknown": unknown,
          "witness": witness}
    if negatives:
        return Decision(False, "oracle", ev)
    if unknown:
        return Decision(None, "oracle", ev)
    return Decision(True, "oracle", ev)


def quasipure_fgsearch(I: Ideal, left_ideals=None) -> Decision:
    """Left ideals J1 <= J2 <= I with I inside J1 and span(J2 J1) = J1 (unital rings)."""
    R = I.ring
    if R.unit is None:
        raise FgSearchUnsupported(f"{R.meta} has no unit")
    if left_ideals is None:
        left_ideals = enumerate_ideals(R, "left")
    X = I._set
    inside = [J for J in left_ideals if J._set <= X]
    for J1 in inside:
        if not X <= J1._set:
            continue
        for J2 in inside:
            if J1._set <= J2._set and set(product_span(R, J2.elements, J1.elements)) == J1._set:
                return Decision(True, "fgsearch", {"J1": list(J1.elements), "J2": list(J2.elements)})
    return Decision(False, "fgsearch", {"left_ideals_searched": len(inside)})


def is_quasipure(I: Ideal, mode: str = "criterion", left_ideals=None, **oracle_args) -> Decision:
    """Quasipurity by I^2 = I, the left-ideal search, the bounded oracle, or all three."""
    if mode not in ("criterion", "fgsearch", "oracle", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "criterion":
        return Decision(is_idempotent(I), "criterion", {"I2": product_span(I.ring, I.elements, I.elements)})
    if mode == "fgsearch":
        return quasipure_fgsearch(I, left_ideals)
    if mode == "oracle":
        return quasipure_oracle(I, **oracle_args)
    crit = is_quasipure(I, "criterion")
    fg = quasipure_fgsearch(I, left_ideals) if I.ring.unit is not None else None
    orc = quasipure_oracle(I, **oracle_args)
    values = {"criterion": crit.value, "oracle": orc.value}
    if fg is not None:
        values["fgsearch"] = fg.value
    conclusive = {k: v for k, v in values.items() if v is not None}
    if len(set(conclusive.values())) > 1:
        raise CrossValidationError(f"quasipurity of {I} in {I.ring.meta}: {values}")
    return Decision(crit.value, "all", {"values": values, "oracle": orc.evidence,
                                        "fgsearch": fg.evidence if fg else None})


# ---------------------------------------------------------------- lattices

def meet_d(I: Ideal, J: Ideal) -> Ideal:
    return make_ideal(I.ring, two_sided_span(I.ring, (I._set & J._set) or {I.ring.zero}))


def meet_qp(I: Ideal, J: Ideal) -> Ideal:
    K = stable_power(ideal_meet(I, J))
    return make_ideal(I.ring, two_sided_span(I.ring, K.elements))


def lattice_ops(I: Ideal, J: Ideal, which: str) -> Ideal:
    """join_d, join_qp (= I + J), meet_d and meet_qp."""
    if which in ("join_d", "meet_d"):
        for K in (I, J):
            if not is_decomposable(K):
                raise ClassPreconditionFailed(f"{K} is not decomposable")
        return ideal_sum(I, J) if which == "join_d" else meet_d(I, J)
    if which in ("join_qp", "meet_qp"):
        for K in (I, J):
            if not is_idempotent(K):
                raise ClassPreconditionFailed(f"{K} is not quasipure")
        return ideal_sum(I, J) if which == "join_qp" else meet_qp(I, J)
    raise ValueError(f"unknown lattice operation {which!r}")


def meet_qp_status(I: Ideal, J: Ideal, samples: int = 8) -> str:
    """Check the span formula for the quasipure meet against the definition.

    Elements of the formula's result must be below some fixed y over I and J
    (positive search); elements of I and J outside it must be excluded by the
    scalar reach argument.  Returns 'verified', 'Unknown' or 'mismatch'.
    """
    R = I.ring
    K = ideal_meet(I, J)
    M = meet_qp(I, J)
    sq = product_span(R, K.elements, K.elements)
    reach = set(two_sided_span(R, sq))
    cands = _fixed_candidates(K)
    status = "verified"
    for x in K.elements:
        inside = x in M
        if x == R.zero:
            continue
        if not inside:
            if x in reach:
                status = "Unknown"
            continue
        xm = RingMatrix.of(R, x)
        found = False
        for y in cands[:samples * 8]:
            try:
                if subordinate(xm, y, Budget(10**6)) is not None:
                    found = True
                    break
            except BudgetExceeded:
                continue
        if not found:
            status = "Unknown"
    return status


@dataclass
class IdealLattice:
    ring: FiniteRing
    ideals: list
    leq: np.ndarray
    flags: list                    # per ideal: dict of class flags
    join: np.ndarray               # index table
    meet_d: np.ndarray             # -1 where not both decomposable
    meet_qp: np.ndarray            # -1 where not both quasipure
    meet_qp_status: str = "verified"

    def index(self, I: Ideal) -> int:
        return self.ideals.index(I)

    def covers(self):
        """Pairs (i, j) with ideal i strictly below j and nothing in between."""
        n = len(self.ideals)
        out = []
        for i in range(n):
            for j in range(n):
                if i != j and self.leq[i, j]:
                    if not any(k not in (i, j) and self.leq[i, k] and self.leq[k, j] for k in range(n)):
                        out.append((i, j))
        return out

    def decomposable(self):
        return [I for I, f in zip(self.ideals, self.flags) if f["d"]]

    def quasipure(self):
        return [I for I, f in zip(self.ideals, self.flags) if f["qp"]]


def build_lattice(R: FiniteRing, check_meets: bool = False) -> IdealLattice:
    ideals = enumerate_ideals(R)
    n = len(ideals)
    pos = {I.elements: k for k, I in enumerate(ideals)}
    leq = np.array([[I <= J for J in ideals] for I in ideals], dtype=bool)
    flags = []
    for I in ideals:
        flags.append({"d": bool(is_decomposable(I)), "qp": is_idempotent(I),
                      "pure": is_pure(I), "idem": is_idempotent(I)})
    join = np.full((n, n), -1, dtype=np.int64)
    md = np.full((n, n), -1, dtype=np.int64)
    mq = np.full((n, n), -1, dtype=np.int64)
    status = "verified"
    for i, I in enumerate(ideals):
        for j, J in enumerate(ideals):
            join[i, j] = pos[ideal_sum(I, J).elements]
            if flags[i]["d"] and flags[j]["d"]:
                md[i, j] = pos[meet_d(I, J).elements]
            if flags[i]["qp"] and flags[j]["qp"]:
                mq[i, j] = pos[meet_qp(I, J).elements]
                if check_meets and R.unit is None and j >= i:
                    st = meet_qp_status(I, J)
                    if st != "verified":
                        status = st if status != "mismatch" else status
    return IdealLattice(R, ideals, leq, flags, join, md, mq, status)


def lattice_to_dot(L: IdealLattice, name: str | None = None) -> str:
    """DOT text: one node per ideal, edges for covering relations."""
    title = name or L.ring.meta
    lines = [f'digraph "{title}" {{', "  rankdir=BT;", "  node [shape=box];"]
    for k, (I, f) in enumerate(zip(L.ideals, L.flags)):
        fl = ",".join(tag for tag in ("d", "qp", "pure", "idem") if f[tag])
        label = f"{I.name() if len(I) <= 8 else 'I' + str(k)} |{len(I)}| [{fl}]"
        lines.append(f'  n{k} [label="{label}"];')
    for i, j in L.covers():
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- retract

@dataclass
class RetractReport:
    ring: str
    checks: dict                  # name -> list of violations
    psi: dict                     # decomposable ideal -> its stable power
    lattice_sizes: tuple

    @property
    def ok(self) -> bool:
        return all(not v for v in self.checks.values())

    def to_json(self):
        return {"ring": self.ring, "ok": self.ok,
                "checks": {k: {"passed": not v, "violations": v[:5]} for k, v in self.checks.items()},
                "psi": [[list(a), list(b)] for a, b in self.psi.items()],
                "lattice_sizes": list(self.lattice_sizes)}


def check_retract(R: FiniteRing) -> RetractReport:
    """phi = inclusion of quasipure ideals, psi = stable power on decomposable ones."""
    ideals = enumerate_ideals(R)
    Ld = [I for I in ideals if is_decomposable(I)]
    Lqp = [I for I in ideals if is_idempotent(I)]
    qp_set = {I.elements for I in Lqp}
    d_set = {I.elements for I in Ld}
    psi = {I.elements: stable_power(I) for I in Ld}
    checks = {"phi_into_Lat_d": [], "psi_into_Lat_qp": [], "psi_phi_identity": [],
              "phi_psi_below": [], "psi_preserves_meets": [], "phi_preserves_joins": []}
    for I in Lqp:
        if I.elements not in d_set:
            checks["phi_into_Lat_d"].append(list(I.elements))
        elif psi[I.elements] != I:
            checks["psi_phi_identity"].append(list(I.elements))
    for I in Ld:
        P = psi[I.elements]
        if P.elements not in qp_set:
            checks["psi_into_Lat_qp"].append(list(I.elements))
        if not P <= I:
            checks["phi_psi_below"].append(list(I.elements))
    for I, J in itertools.product(Ld, repeat=2):
        lhs = stable_power(meet_d(I, J))
        rhs = meet_qp(psi[I.elements], psi[J.elements])
        if lhs != rhs:
            checks["psi_preserves_meets"].append([list(I.elements), list(J.elements)])
    for I, J in itertools.product(Lqp, repeat=2):
        S = ideal_sum(I, J)
        if S.elements not in qp_set or S.elements not in d_set:
            checks["phi_preserves_joins"].append([list(I.elements), list(J.elements)])
    return RetractReport(R.meta, checks, {k: v.elements for k, v in psi.items()}, (len(Ld), len(Lqp)))


# ---------------------------------------------------------------- trace ideals

def trace_ideal(e: RingMatrix) -> Ideal:
    """Two-sided ideal spanned by R . entries(e) . R for an idempotent e."""
    R = e.ring
    if e.rows != e.cols or not (e @ e).same_element(e):
        raise NotIdempotent(f"{e} is not idempotent")
    I = make_ideal(R, two_sided_span(R, e.entries))
    if not is_idempotent(I):
        raise CrossValidationError(f"trace ideal {I} of {e} is not idempotent")
    return I


def find_trace_idempotent(I: Ideal, max_size: int | None = None):
    """An idempotent matrix e with trace_ideal(e) = I, sizes 1..min(|I|, max_size).

    Returns (e, None) on success or (None, 'Unknown') when the capped search
    found nothing; the search never reports a definite 'no'.
    """
    R = I.ring
    cap = min(len(I), max_size or len(I))
    target = I._set
    if I.elements == (R.zero,):
        return RingMatrix.of(R, R.zero), None
    for k in range(1, cap + 1):
        space = matrix_space(R, k)
        if space is None:
            break
        member = np.zeros(R.size, dtype=bool)
        member[list(I.elements)] = True
        idem = space.idempotents
        idem = idem[member[idem].all(axis=(1, 2))]
        for e in idem:
            if set(two_sided_span(R, e.ravel().tolist())) == target:
                return RingMatrix.from_array(R, e), None
    # block-diagonal sums of scalar idempotents in I
    scal = [int(x) for x in I.elements if R.mul[x, x] == x and x != R.zero]
    for k in range(2, min(cap, len(scal)) + 1):
        for combo in itertools.combinations(scal, k):
            if set(two_sided_span(R, combo)) == target:
                return RingMatrix.from_array(R, np.diag(combo)), None
    return None, "Unknown"
