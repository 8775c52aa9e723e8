"""Rectangular matrices over a finite ring and the subordination search.

x is subordinate to y when x = s.y.t for matrices s, t over the ring (never
over a unitalization).  Matrices stand for zero-padded infinite matrices, so
sizes only have to be compatible after padding.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, RingMismatch
from .rings import FiniteRing, additive_closure

DEFAULT_BUDGET = 10**8
_CHUNK_CELLS = 1 << 22


# ---------------------------------------------------------------- array kernels

def matmul_arrays(R: FiniteRing, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Batched product over R: X[..., n, m] @ Y[..., m, p]."""
    m = X.shape[-1]
    if m == 0:
        shape = np.broadcast_shapes(X.shape[:-2], Y.shape[:-2]) + (X.shape[-2], Y.shape[-1])
        return np.full(shape, R.zero, dtype=np.int64)
    P = R.mul[X[..., :, :, None], Y[..., None, :, :]]
    acc = P[..., 0, :]
    for l in range(1, m):
        acc = R.add[acc, P[..., l, :]]
    return acc.astype(np.int64)


def enumerate_matrices(R: FiniteRing, rows: int, cols: int, lo: int = 0, hi: int | None = None) -> np.ndarray:
    """Matrices number lo..hi-1 of M_{rows x cols}(R) in lexicographic order."""
    k = rows * cols
    total = R.size ** k
    hi = total if hi is None else min(hi, total)
    idx = np.arange(lo, hi, dtype=np.int64)
    out = np.empty((len(idx), k), dtype=np.int64)
    for p in range(k - 1, -1, -1):
        out[:, p] = idx % R.size
        idx //= R.size
    return out.reshape(-1, rows, cols)


def opposite(R: FiniteRing) -> FiniteRing:
    op = getattr(R, "_opposite", None)
    if op is None:
        op = FiniteRing(R.add, np.asarray(R.mul).T, zero=R.zero, name=f"opposite({R.name})",
                        meta=f"opposite({R.meta})", labels=R.labels,
                        unit=R.unit)
        R._opposite = op
    return op


def two_sided_span(R: FiniteRing, elements) -> list[int]:
    """Additive span of R.e.R over the given elements."""
    el = np.unique(np.asarray(list(elements), dtype=np.int64))
    key = (R.meta, el.tobytes())
    if key not in _span_cache:
        left = np.unique(R.mul[:, el])
        prods = np.unique(R.mul[left, :])
        if len(_span_cache) > 50_000:
            _span_cache.clear()
        _span_cache[key] = additive_closure(R, prods.tolist())
    return _span_cache[key]


_span_cache: dict = {}


# ---------------------------------------------------------------- matrices

@dataclass(frozen=True, eq=False)
class RingMatrix:
    ring: FiniteRing = field(repr=False)
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch("entry count does not match shape")

    @classmethod
    def from_array(cls, R: FiniteRing, arr) -> "RingMatrix":
        a = np.asarray(arr, dtype=np.int64)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        return cls(R, int(a.shape[0]), int(a.shape[1]), tuple(int(v) for v in a.ravel()))

    @classmethod
    def of(cls, R: FiniteRing, rows) -> "RingMatrix":
        """From a nested list of indices or labels; a bare value gives a 1x1 matrix."""
        if not isinstance(rows, (list, tuple)):
            rows = [[rows]]
        return cls.from_array(R, [[R.index_of(v) for v in row] for row in rows])

    @classmethod
    def zeros(cls, R: FiniteRing, rows: int, cols: int) -> "RingMatrix":
        return cls(R, rows, cols, (R.zero,) * (rows * cols))

    @classmethod
    def identity(cls, R: FiniteRing, n: int) -> "RingMatrix":
        if R.unit is None:
            raise ValueError(f"{R.meta} has no unit")
        a = np.full((n, n), R.zero)
        np.fill_diagonal(a, R.unit)
        return cls.from_array(R, a)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=np.int64).reshape(self.rows, self.cols)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def is_zero(self) -> bool:
        return all(e == self.ring.zero for e in self.entries)

    def padded(self, rows: int, cols: int) -> "RingMatrix":
        if rows < self.rows or cols < self.cols:
            raise DimensionMismatch("cannot pad to a smaller shape")
        a = np.full((rows, cols), self.ring.zero, dtype=np.int64)
        a[:self.rows, :self.cols] = self.array
        return RingMatrix.from_array(self.ring, a)

    def square(self) -> "RingMatrix":
        n = max(self.rows, self.cols)
        return self.padded(n, n)

    def trimmed(self) -> "RingMatrix":
        """Drop trailing zero rows and columns (keeps at least 1x1)."""
        a = self.array
        nz = a != self.ring.zero
        r = max(1, int(np.max(np.nonzero(nz.any(axis=1))[0], initial=-1)) + 1)
        c = max(1, int(np.max(np.nonzero(nz.any(axis=0))[0], initial=-1)) + 1)
        return RingMatrix.from_array(self.ring, a[:r, :c]) if (r, c) != self.shape else self

    def same_element(self, other: "RingMatrix") -> bool:
        """Equality as zero-padded infinite matrices."""
        _check_ring(self, other)
        r, c = max(self.rows, other.rows), max(self.cols, other.cols)
        return self.padded(r, c).entries == other.padded(r, c).entries

    def __eq__(self, other):
        return (isinstance(other, RingMatrix) and self.ring.same_as(other.ring)
                and self.shape == other.shape and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ring.meta, self.rows, self.cols, self.entries))

    def __add__(self, other):
        return mat_ops(self, other, "add")

    def __sub__(self, other):
        return mat_ops(self, mat_ops(other, None, "neg"), "add")

    def __neg__(self):
        return mat_ops(self, None, "neg")

    def __matmul__(self, other):
        return mat_ops(self, other, "mul")

    def direct_sum(self, other):
        return mat_ops(self, other, "direct_sum")

    def entries_in(self, subset) -> bool:
        s = set(subset)
        return all(e in s for e in self.entries)

    def to_json(self):
        return self.array.tolist()

    def __str__(self):
        L = self.ring.labels
        return "[" + "; ".join(" ".join(L[v] for v in row) for row in self.array) + "]"


def _check_ring(x: RingMatrix, y: RingMatrix):
    if not x.ring.same_as(y.ring):
        raise RingMismatch(f"{x.ring.meta} vs {y.ring.meta}")


def mat_ops(x: RingMatrix, y: RingMatrix | None, kind: str) -> RingMatrix:
    """add | mul | neg | direct_sum, all table driven."""
    R = x.ring
    if kind == "neg":
        return RingMatrix.from_array(R, R.neg[x.array])
    _check_ring(x, y)
    if kind == "add":
        if x.shape != y.shape:
            raise DimensionMismatch(f"add {x.shape} + {y.shape}")
        return RingMatrix.from_array(R, R.add[x.array, y.array])
    if kind == "mul":
        if x.cols != y.rows:
            raise DimensionMismatch(f"mul {x.shape} * {y.shape}")
        return RingMatrix.from_array(R, matmul_arrays(R, x.array, y.array))
    if kind == "direct_sum":
        a = np.full((x.rows + y.rows, x.cols + y.cols), R.zero, dtype=np.int64)
        a[:x.rows, :x.cols] = x.array
        a[x.rows:, x.cols:] = y.array
        return RingMatrix.from_array(R, a)
    raise ValueError(f"unknown matrix operation {kind!r}")


def direct_sum(*ms: RingMatrix) -> RingMatrix:
    out = ms[0]
    for m in ms[1:]:
        out = out.direct_sum(m)
    return out


def block(R: FiniteRing, blocks) -> RingMatrix:
    """Assemble a block matrix from a grid of RingMatrix (None = zero block)."""
    heights = []
    for row in blocks:
        h = {b.rows for b in row if b is not None}
        if len(h) > 1:
            raise DimensionMismatch("ragged block row")
        heights.append(h.pop() if h else 0)
    widths = []
    for j in range(len(blocks[0])):
        w = {row[j].cols for row in blocks if row[j] is not None}
        if len(w) > 1:
            raise DimensionMismatch("ragged block column")
        widths.append(w.pop() if w else 0)
    a = np.full((sum(heights), sum(widths)), R.zero, dtype=np.int64)
    r = 0
    for i, row in enumerate(blocks):
        c = 0
        for j, b in enumerate(row):
            if b is not None:
                a[r:r + heights[i], c:c + widths[j]] = b.array
            c += widths[j]
        r += heights[i]
    return RingMatrix.from_array(R, a)


# ---------------------------------------------------------------- subordination

@dataclass(frozen=True)
class SubordinationWitness:
    left: RingMatrix
    right: RingMatrix

    def verify(self, x: RingMatrix, y: RingMatrix) -> bool:
        """s.y.t equals x as padded matrices."""
        s, t = self.left, self.right
        if s.cols < y.rows or t.rows < y.cols:
            return False
        yy = y.padded(s.cols, t.rows)
        return (s @ yy @ t).same_element(x)

    def to_json(self):
        return {"left": self.left.to_json(), "right": self.right.to_json()}


class Budget:
    """Shared counter of elementary table operations."""

    def __init__(self, limit: int = DEFAULT_BUDGET):
        self.limit = limit
        self.used = 0

    def charge(self, n: int):
        self.used += int(n)
        if self.used > self.limit:
            raise BudgetExceeded(f"operation budget {self.limit} exhausted")

    def can_afford(self, n: int) -> bool:
        return self.used + n <= self.limit


def _as_budget(budget) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(DEFAULT_BUDGET if budget is None else budget)


def _row_codes(rows: np.ndarray, q: int) -> np.ndarray:
    p = rows.shape[-1]
    code = np.zeros(rows.shape[:-1], dtype=np.int64)
    for j in range(p):
        code = code * q + rows[..., j]
    return code


def _solve_enumerating_t(R: FiniteRing, X: np.ndarray, Y: np.ndarray, budget: Budget):
    """Find s, t with X = s Y t by enumerating t and solving s row by row.

    Every row of X must be a left R-combination of the rows of z = Y t.
    """
    n, p = X.shape
    m, q = Y.shape
    Q = R.size
    if p * np.log2(max(Q, 2)) >= 62:
        raise BudgetExceeded("row codes would overflow; shrink the query")
    n_t = Q ** (q * p)
    N = Q ** m
    if N > _CHUNK_CELLS:
        raise BudgetExceeded(f"{N} coefficient rows would not fit in memory")
    S_all = enumerate_matrices(R, 1, m).reshape(-1, m)
    per_t = N * m * p + m * q * p
    chunk = max(1, min(n_t, _CHUNK_CELLS // max(1, N * m * p)))
    targets = _row_codes(X, Q)
    for lo in range(0, n_t, chunk):
        hi = min(n_t, lo + chunk)
        budget.charge((hi - lo) * per_t)
        T = enumerate_matrices(R, q, p, lo, hi)
        Z = matmul_arrays(R, Y[None], T)
        L = matmul_arrays(R, S_all[None, :, None, :], Z[:, None, :, :])[:, :, 0, :]
        codes = _row_codes(L, Q)
        hit = np.ones(hi - lo, dtype=bool)
        for code in targets:
            hit &= (codes == code).any(axis=1)
        if hit.any():
            c = int(np.argmax(hit))
            S = np.stack([S_all[int(np.argmax(codes[c] == code))] for code in targets])
            return S, T[c]
    return None


def subordinate(x: RingMatrix, y: RingMatrix, budget=None) -> SubordinationWitness | None:
    """A witness (s, t) with s.y.t = x, or None when none exists.

    The search is exhaustive over the smaller side and deterministic, so the
    same query always returns the same witness.  Raises BudgetExceeded instead
    of answering when the search would be too large.
    """
    _check_ring(x, y)
    R = x.ring
    budget = _as_budget(budget)
    X, Y = x.array, y.array
    n, p = X.shape
    m, q = Y.shape
    S = np.full((n, m), R.zero, dtype=np.int64)
    T = np.full((q, p), R.zero, dtype=np.int64)
    if x.is_zero():
        return SubordinationWitness(RingMatrix.from_array(R, S), RingMatrix.from_array(R, T))
    # entries of s.y.t lie in the additive span of R.y_ij.R
    reach = set(two_sided_span(R, y.entries))
    budget.charge(R.size * R.size * len(set(y.entries)))
    if any(e not in reach for e in x.entries):
        return None
    z = R.zero
    rx = np.nonzero((X != z).any(axis=1))[0]
    cx = np.nonzero((X != z).any(axis=0))[0]
    ry = np.nonzero((Y != z).any(axis=1))[0]
    cy = np.nonzero((Y != z).any(axis=0))[0]
    Xr, Yr = X[np.ix_(rx, cx)], Y[np.ix_(ry, cy)]
    n2, p2 = Xr.shape
    m2, q2 = Yr.shape
    cost_t = R.size ** (q2 * p2 + m2)
    cost_s = R.size ** (n2 * m2 + q2)
    if cost_t <= cost_s:
        found = _solve_enumerating_t(R, Xr, Yr, budget)
        if found is None:
            return None
        s2, t2 = found
    else:
        op = opposite(R)
        found = _solve_enumerating_t(op, Xr.T, Yr.T, budget)
        if found is None:
            return None
        s2, t2 = found[1].T, found[0].T
    S[np.ix_(rx, ry)] = s2
    T[np.ix_(cy, cx)] = t2
    w = SubordinationWitness(RingMatrix.from_array(R, S), RingMatrix.from_array(R, T))
    return w


def is_subordinate(x: RingMatrix, y: RingMatrix, budget=None) -> bool:
    return subordinate(x, y, budget) is not None


def equiv1(x: RingMatrix, y: RingMatrix, budget=None) -> bool:
    budget = _as_budget(budget)
    return subordinate(x, y, budget) is not None and subordinate(y, x, budget) is not None


def compose_witnesses(w_xy: SubordinationWitness, w_yz: SubordinationWitness, y: RingMatrix) -> SubordinationWitness:
    """From x = s1.y.t1 and y = s2.z.t2 build x = (s1 s2).z.(t2 t1)."""
    s1, t1 = w_xy.left, w_xy.right
    s2, t2 = w_yz.left, w_yz.right
    r = max(s1.cols, s2.rows)
    c = max(t1.rows, t2.cols)
    s1p = s1.padded(s1.rows, r)
    t1p = t1.padded(c, t1.cols)
    s2p = s2.padded(r, s2.cols)
    t2p = t2.padded(t2.rows, c)
    return SubordinationWitness(s1p @ s2p, t2p @ t1p)


def sum_witness(w1: SubordinationWitness, w2: SubordinationWitness) -> SubordinationWitness:
    """Block-diagonal witness for x1 + x2 (direct sum) below y1 + y2 (direct sum)."""
    return SubordinationWitness(w1.left.direct_sum(w2.left), w1.right.direct_sum(w2.right))


def fit_witness(w: SubordinationWitness, x: RingMatrix, y: RingMatrix) -> SubordinationWitness:
    """Pad a witness so that s.y.t has exactly the shape of x with y as given."""
    s = w.left.padded(max(w.left.rows, x.rows), max(w.left.cols, y.rows))
    t = w.right.padded(max(w.right.rows, y.cols), max(w.right.cols, x.cols))
    sa = s.array[:x.rows, :y.rows]
    ta = t.array[:y.cols, :x.cols]
    return SubordinationWitness(RingMatrix.from_array(x.ring, sa), RingMatrix.from_array(x.ring, ta))
