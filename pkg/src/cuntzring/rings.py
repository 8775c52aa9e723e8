"""Finite rings as dense Cayley tables.

Elements are the integers 0..q-1.  Every ring carries its addition and
multiplication tables as read-only numpy arrays, the index of zero, an
optional unit, a display name, the constructor expression that built it
(``meta``) and one printable label per element.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AxiomViolation, NotAnIdeal, SizeLimitExceeded

MAX_RING_SIZE = 4096
EXHAUSTIVE_LIMIT = 64
SAMPLED_TRIPLES = 10**6


def _frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int32)
    a.setflags(write=False)
    return a


def _find_unit(mul: np.ndarray):
    q = mul.shape[0]
    ident = np.arange(q)
    for e in range(q):
        if np.array_equal(mul[e], ident) and np.array_equal(mul[:, e], ident):
            return e
    return None


class FiniteRing:
    """A finite, possibly non-unital, ring given by its tables."""

    def __init__(self, add, mul, zero=0, name="", meta="", labels=None, unit="detect"):
        add = _frozen(add)
        mul = _frozen(mul)
        q = add.shape[0]
        if q > MAX_RING_SIZE:
            raise SizeLimitExceeded(f"ring of size {q} exceeds {MAX_RING_SIZE}")
        if add.shape != (q, q) or mul.shape != (q, q):
            raise AxiomViolation("tables must be square and of equal size")
        self.size = q
        self.add = add
        self.mul = mul
        self.zero = int(zero)
        neg = np.full(q, -1, dtype=np.int32)
        rows, cols = np.nonzero(add == self.zero)
        neg[rows] = cols
        if (neg < 0).any():
            raise AxiomViolation("some element has no additive inverse")
        self.neg = _frozen(neg)
        self.unit = _find_unit(mul) if unit == "detect" else unit
        self.name = name or meta or f"ring{q}"
        self.meta = meta or self.name
        if labels is None:
            labels = [str(i) for i in range(q)]
        self.labels = tuple(labels)
        self._label_index = None

    def __repr__(self):
        return f"FiniteRing({self.meta!r}, size={self.size})"

    def __len__(self):
        return self.size

    @property
    def id(self) -> str:
        return self.meta

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    def same_as(self, other) -> bool:
        return self is other or (self.meta == other.meta and self.size == other.size)

    def label(self, i: int) -> str:
        return self.labels[i]

    def index_of(self, label) -> int:
        """Element index from an int or a printed label (whitespace ignored)."""
        if isinstance(label, (int, np.integer)):
            i = int(label)
            if not 0 <= i < self.size:
                raise ValueError(f"index {i} out of range for {self.meta}")
            return i
        if self._label_index is None:
            self._label_index = {_squash(s): i for i, s in enumerate(self.labels)}
        key = _squash(str(label))
        if key not in self._label_index:
            raise ValueError(f"no element labelled {label!r} in {self.meta}")
        return self._label_index[key]

    def elements(self):
        return range(self.size)

    def sub(self, a, b):
        return int(self.add[a, self.neg[b]])

    def times(self, n: int, x: int) -> int:
        """n-fold sum x + ... + x (n >= 0)."""
        acc = self.zero
        for _ in range(n):
            acc = int(self.add[acc, x])
        return acc

    def element(self, i):
        return RingElement(self, int(i))


def _squash(s: str) -> str:
    return "".join(s.split())


@dataclass(frozen=True)
class RingElement:
    ring: FiniteRing = field(repr=False)
    idx: int

    def __post_init__(self):
        if not 0 <= self.idx < self.ring.size:
            raise ValueError("element index out of range")

    def __add__(self, other):
        return RingElement(self.ring, int(self.ring.add[self.idx, other.idx]))

    def __mul__(self, other):
        return RingElement(self.ring, int(self.ring.mul[self.idx, other.idx]))

    def __neg__(self):
        return RingElement(self.ring, int(self.ring.neg[self.idx]))

    def __str__(self):
        return self.ring.labels[self.idx]


@dataclass
class RingMorphism:
    source: FiniteRing
    target: FiniteRing
    map: np.ndarray
    unital: bool = False

    def __call__(self, i: int) -> int:
        return int(self.map[i])

    def check(self) -> bool:
        """True if the table preserves zero, addition, multiplication (and unit if flagged)."""
        f = np.asarray(self.map)
        s, t = self.source, self.target
        if f[s.zero] != t.zero:
            return False
        if not np.array_equal(f[s.add], t.add[f[:, None], f[None, :]]):
            return False
        if not np.array_equal(f[s.mul], t.mul[f[:, None], f[None, :]]):
            return False
        if self.unital and s.unit is not None and t.unit is not None:
            return f[s.unit] == t.unit
        return True

    def kernel(self) -> list[int]:
        return [i for i in range(self.source.size) if self.map[i] == self.target.zero]


# ---------------------------------------------------------------- axioms

@dataclass
class AxiomCheck:
    axiom: str
    passed: bool
    counterexample: tuple | None = None


@dataclass
class AxiomReport:
    ring: str
    exhaustive: bool
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        lines = [f"{self.ring}: {'exhaustive' if self.exhaustive else 'sampled'}"]
        for c in self.checks:
            tail = "" if c.passed else f"  counterexample {c.counterexample}"
            lines.append(f"  {c.axiom:<22} {'pass' if c.passed else 'FAIL'}{tail}")
        return "\n".join(lines)


def verify_ring_axioms(R: FiniteRing, seed: int = 0, samples: int = SAMPLED_TRIPLES) -> AxiomReport:
    """Check every ring axiom, exhaustively when |R| <= 64, else on sampled triples."""
    A, M, z, q = R.add, R.mul, R.zero, R.size
    checks = []
    # the commutative group part is always checked in full on pairs
    x = np.arange(q)
    comm = A == A.T
    bad = np.argwhere(~comm)
    checks.append(AxiomCheck("add_commutative", not len(bad), tuple(map(int, bad[0])) if len(bad) else None))
    ok = A[z] == x
    checks.append(AxiomCheck("add_identity", bool(ok.all()), None if ok.all() else (int(np.argmin(ok)),)))
    ok = A[x, R.neg] == z
    checks.append(AxiomCheck("add_inverse", bool(ok.all()), None if ok.all() else (int(np.argmin(ok)),)))
    ok = (M[z] == z) & (M[:, z] == z)
    checks.append(AxiomCheck("zero_annihilates", bool(ok.all()), None if ok.all() else (int(np.argmin(ok)),)))
    if R.unit is not None:
        ok = (M[R.unit] == x) & (M[:, R.unit] == x)
        checks.append(AxiomCheck("unit", bool(ok.all()), None if ok.all() else (int(np.argmin(ok)),)))

    exhaustive = q <= EXHAUSTIVE_LIMIT
    if exhaustive:
        a, b, c = np.meshgrid(x, x, x, indexing="ij")
        a, b, c = a.ravel(), b.ravel(), c.ravel()
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, q, size=(3, samples))
    for name, lhs, rhs in (
        ("add_associative", A[A[a, b], c], A[a, A[b, c]]),
        ("mul_associative", M[M[a, b], c], M[a, M[b, c]]),
        ("left_distributive", M[a, A[b, c]], A[M[a, b], M[a, c]]),
        ("right_distributive", M[A[a, b], c], A[M[a, c], M[b, c]]),
    ):
        eq = lhs == rhs
        if eq.all():
            checks.append(AxiomCheck(name, True))
        else:
            k = int(np.argmin(eq))
            checks.append(AxiomCheck(name, False, (int(a[k]), int(b[k]), int(c[k]))))
    return AxiomReport(R.meta, exhaustive, checks)


def validated(R: FiniteRing) -> FiniteRing:
    report = verify_ring_axioms(R)
    if not report.ok:
        raise AxiomViolation(str(report))
    return R


# ---------------------------------------------------------------- constructors

def zmod(n: int) -> FiniteRing:
    if n < 1:
        raise ValueError("zmod needs n >= 1")
    if n > MAX_RING_SIZE:
        raise SizeLimitExceeded(f"zmod({n})")
    x = np.arange(n)
    return FiniteRing((x[:, None] + x[None, :]) % n, (x[:, None] * x[None, :]) % n,
                      name=f"zmod({n})", meta=f"zmod({n})")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def gf(p: int) -> FiniteRing:
    if not _is_prime(p):
        raise ValueError(f"gf({p}): only prime fields are supported")
    R = zmod(p)
    R.name = R.meta = f"gf({p})"
    return R


def zero_mult(n: int) -> FiniteRing:
    """Cyclic group of order n with identically zero multiplication."""
    if n > MAX_RING_SIZE:
        raise SizeLimitExceeded(f"zero_mult({n})")
    x = np.arange(n)
    return FiniteRing((x[:, None] + x[None, :]) % n, np.zeros((n, n), dtype=np.int32),
                      name=f"zero_mult({n})", meta=f"zero_mult({n})")


def _positions(k: int, upper: bool):
    return [(i, j) for i in range(k) for j in range(k) if not upper or i <= j]


def _matrix_like(k: int, R: FiniteRing, upper: bool) -> FiniteRing:
    pos = _positions(k, upper)
    q0 = R.size
    if q0 ** len(pos) > MAX_RING_SIZE:
        raise SizeLimitExceeded(f"{'upper' if upper else 'matrix'}({k},{R.meta}) has {q0}^{len(pos)} elements")
    q = q0 ** len(pos)
    # digits[e, p] = entry at position pos[p] of element e (big-endian)
    digits = np.array(list(itertools.product(range(q0), repeat=len(pos))), dtype=np.int64).reshape(q, len(pos))
    full = np.full((q, k, k), R.zero, dtype=np.int64)
    for p, (i, j) in enumerate(pos):
        full[:, i, j] = digits[:, p]
    weights = q0 ** np.arange(len(pos) - 1, -1, -1)

    def encode(F):  # F[..., k, k] -> index
        return sum(F[..., i, j] * weights[p] for p, (i, j) in enumerate(pos))

    add = encode(R.add[full[:, None], full[None, :]])
    mul = np.empty((q, q), dtype=np.int64)
    chunk = max(1, 2_000_000 // (q * k ** 3))
    for lo in range(0, q, chunk):
        a = full[lo:lo + chunk]
        prod = R.mul[a[:, None, :, :, None], full[None, :, None, :, :]]  # A,B,i,l,j
        acc = prod[:, :, :, 0, :]
        for l in range(1, k):
            acc = R.add[acc, prod[:, :, :, l, :]]
        mul[lo:lo + chunk] = encode(acc)
    labels = ["[" + ",".join("[" + ",".join(R.labels[full[e, i, j]] for j in range(k)) + "]"
                             for i in range(k)) + "]" for e in range(q)]
    zero = int(encode(np.full((k, k), R.zero)))
    kind = "upper" if upper else "matrix"
    meta = f"{kind}({k},{R.meta})"
    return FiniteRing(add, mul, zero=zero, name=meta, meta=meta, labels=labels)


def matrix(k: int, R: FiniteRing) -> FiniteRing:
    return _matrix_like(k, R, upper=False)


def upper(k: int, R: FiniteRing) -> FiniteRing:
    return _matrix_like(k, R, upper=True)


def product(R: FiniteRing, S: FiniteRing) -> FiniteRing:
    q = R.size * S.size
    if q > MAX_RING_SIZE:
        raise SizeLimitExceeded(f"product of sizes {R.size} and {S.size}")
    a = np.arange(q) // S.size
    b = np.arange(q) % S.size
    add = R.add[a[:, None], a[None, :]] * S.size + S.add[b[:, None], b[None, :]]
    mul = R.mul[a[:, None], a[None, :]] * S.size + S.mul[b[:, None], b[None, :]]
    labels = [f"({R.labels[i]},{S.labels[j]})" for i, j in zip(a, b)]
    meta = f"product({R.meta},{S.meta})"
    return FiniteRing(add, mul, zero=R.zero * S.size + S.zero, name=meta, meta=meta, labels=labels)


def additive_closure(R: FiniteRing, gens) -> list[int]:
    """Smallest additive subgroup containing gens, sorted."""
    seen = {R.zero}
    frontier = [R.zero]
    gens = sorted({int(g) for g in gens})
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(R.add[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def ideal_closure(R: FiniteRing, gens, side: str = "two") -> list[int]:
    """Smallest ideal (two, left or right) containing gens."""
    current = set(additive_closure(R, gens))
    while True:
        prods = set(current)
        cur = np.fromiter(current, dtype=np.int64)
        if side in ("two", "left"):
            prods.update(np.unique(R.mul[:, cur]).tolist())
        if side in ("two", "right"):
            prods.update(np.unique(R.mul[cur, :]).tolist())
        closed = set(additive_closure(R, prods))
        if closed == current:
            return sorted(current)
        current = closed


def subring_closure(R: FiniteRing, gens) -> list[int]:
    current = set(additive_closure(R, gens))
    while True:
        cur = np.fromiter(current, dtype=np.int64)
        prods = set(np.unique(R.mul[cur[:, None], cur[None, :]]).tolist()) | current
        closed = set(additive_closure(R, prods))
        if closed == current:
            return sorted(current)
        current = closed


def restrict(R: FiniteRing, elements, meta: str) -> FiniteRing:
    """The ring carried by a subset of R closed under +, - and *."""
    elems = np.asarray(sorted(elements), dtype=np.int64)
    pos = np.full(R.size, -1, dtype=np.int64)
    pos[elems] = np.arange(len(elems))
    add = pos[R.add[elems[:, None], elems[None, :]]]
    mul = pos[R.mul[elems[:, None], elems[None, :]]]
    if (add < 0).any() or (mul < 0).any():
        raise AxiomViolation(f"{meta}: subset is not closed")
    labels = [R.labels[e] for e in elems]
    return FiniteRing(add, mul, zero=int(pos[R.zero]), name=meta, meta=meta, labels=labels)


def subring_nonunital(R: FiniteRing, gens, gens_text: str | None = None) -> FiniteRing:
    gens = [R.index_of(g) for g in gens]
    text = gens_text if gens_text is not None else ",".join(R.labels[g] for g in gens)
    return restrict(R, subring_closure(R, gens), f"subring_nonunital({R.meta},{{{text}}})")


def additive_exponent(R: FiniteRing) -> int:
    """Least e >= 1 with e*x = 0 for every x (lcm of additive orders)."""
    e = 1
    for x in range(R.size):
        n, acc = 1, x
        while acc != R.zero:
            acc = int(R.add[acc, x])
            n += 1
        e = math.lcm(e, n)
    return e


def unitalize(R: FiniteRing) -> tuple[FiniteRing, RingMorphism]:
    """Dorroh extension over Z/e, e the additive exponent of R.

    Carrier (Z/e) x R with (m,a)(n,b) = (mn, m.b + n.a + ab); unit (1,0).
    """
    e = additive_exponent(R)
    q0 = R.size
    q = e * q0
    if q > MAX_RING_SIZE:
        raise SizeLimitExceeded(f"dorroh({R.meta}) would have {q} elements")
    # multiples[n, a] = n.a
    multiples = np.empty((e, q0), dtype=np.int64)
    multiples[0] = R.zero
    for n in range(1, e):
        multiples[n] = R.add[multiples[n - 1], np.arange(q0)]
    m = np.arange(q) // q0
    a = np.arange(q) % q0
    M1, M2 = m[:, None], m[None, :]
    A1, A2 = a[:, None], a[None, :]
    add = ((M1 + M2) % e) * q0 + R.add[A1, A2]
    second = R.add[R.add[multiples[M1, A2], multiples[M2, A1]], R.mul[A1, A2]]
    mul = ((M1 * M2) % e) * q0 + second
    labels = [f"({mm},{R.labels[aa]})" for mm, aa in zip(m, a)]
    meta = f"dorroh({R.meta})"
    Rp = FiniteRing(add, mul, zero=R.zero, name=meta, meta=meta, labels=labels)
    embedding = RingMorphism(R, Rp, np.arange(q0, dtype=np.int64))  # (0,a) has index a
    return Rp, embedding


def is_two_sided_ideal(R: FiniteRing, elements) -> bool:
    el = np.asarray(sorted(set(int(i) for i in elements)), dtype=np.int64)
    member = np.zeros(R.size, dtype=bool)
    member[el] = True
    if not member[R.zero] or not member[R.add[el[:, None], el[None, :]]].all():
        return False
    return bool(member[R.mul[:, el]].all() and member[R.mul[el, :]].all())


def quotient_ring(R: FiniteRing, I) -> tuple[FiniteRing, RingMorphism]:
    """R/I on additive cosets; returns the ring and the projection."""
    elements = sorted(getattr(I, "elements", I))
    if not is_two_sided_ideal(R, elements):
        raise NotAnIdeal(f"{elements} is not a two-sided ideal of {R.meta}")
    el = np.asarray(elements, dtype=np.int64)
    # coset representative = smallest element of x + I
    rep = R.add[:, el].min(axis=1)
    reps = np.unique(rep)
    proj = np.searchsorted(reps, rep)
    add = proj[R.add[reps[:, None], reps[None, :]]]
    mul = proj[R.mul[reps[:, None], reps[None, :]]]
    labels = [f"{R.labels[r]}+I" for r in reps]
    text = ",".join(R.labels[i] for i in elements)
    meta = f"quotient({R.meta},{{{text}}})"
    Q = FiniteRing(add, mul, zero=int(proj[R.zero]), name=meta, meta=meta, labels=labels)
    return Q, RingMorphism(R, Q, proj, unital=R.unit is not None)
