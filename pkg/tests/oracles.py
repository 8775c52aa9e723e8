"""Independent brute-force oracles in plain Python.

They use only the Cayley tables of a ring and itertools, never the
package's search code, so agreement with the package is a real check.
"""
import itertools


def tables(R):
    return R.add.tolist(), R.mul.tolist(), R.zero


def mat_mul(R, A, B):
    add, mul, zero = tables(R)
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = zero
            for k in range(m):
                acc = add[acc][mul[A[i][k]][B[k][j]]]
            row.append(acc)
        out.append(row)
    return out


def all_matrices(R, rows, cols):
    for flat in itertools.product(range(R.size), repeat=rows * cols):
        yield [list(flat[i * cols:(i + 1) * cols]) for i in range(rows)]


def pad(R, A, n, m):
    out = [[R.zero] * m for _ in range(n)]
    for i, row in enumerate(A):
        for j, v in enumerate(row):
            out[i][j] = v
    return out


def trimmed_equal(R, A, B):
    n = max(len(A), len(B))
    m = max(len(A[0]) if A else 0, len(B[0]) if B else 0)
    return pad(R, A, n, m) == pad(R, B, n, m)


def below_set(R, y, k):
    """All s.y.t of size k x k (s: k x m, t: q x k)."""
    m, q = len(y), len(y[0])
    out = set()
    for s in all_matrices(R, k, m):
        sy = mat_mul(R, s, y)
        for t in all_matrices(R, q, k):
            out.add(tuple(map(tuple, mat_mul(R, sy, t))))
    return out


def brute_subordinate(R, x, y):
    """x = s.y.t with s, t of the natural sizes (x padded to at least y's size)."""
    n = max(len(x), len(y), len(y[0]), len(x[0]))
    xp = pad(R, x, n, n)
    yp = pad(R, y, n, n)
    return tuple(map(tuple, xp)) in below_set(R, yp, n)


def ring_axioms(R):
    add, mul, zero = tables(R)
    q = R.size
    ok = all(add[a][zero] == a for a in range(q))
    ok &= all(any(add[a][b] == zero for b in range(q)) for a in range(q))
    ok &= all(add[a][b] == add[b][a] for a in range(q) for b in range(q))
    for a, b, c in itertools.product(range(q), repeat=3):
        ok &= add[add[a][b]][c] == add[a][add[b][c]]
        ok &= mul[mul[a][b]][c] == mul[a][mul[b][c]]
        ok &= mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]]
        ok &= mul[add[a][b]][c] == add[mul[a][c]][mul[b][c]]
        if not ok:
            return False
    return ok


def additive_span(R, S):
    add = R.add.tolist()
    out = set(S) | {R.zero}
    grew = True
    while grew:
        new = {add[a][b] for a in out for b in out} - out
        grew = bool(new)
        out |= new
    return out


def two_sided_ideal(R, gens):
    mul = R.mul.tolist()
    cur = additive_span(R, gens)
    while True:
        ext = cur | {mul[r][x] for r in range(R.size) for x in cur} | {mul[x][r] for r in range(R.size) for x in cur}
        nxt = additive_span(R, ext)
        if nxt == cur:
            return cur
        cur = nxt


def all_ideals(R):
    """Every two-sided ideal, as the closure of every subset of generators up to size 2."""
    found = {frozenset(two_sided_ideal(R, []))}
    for g in range(R.size):
        found.add(frozenset(two_sided_ideal(R, [g])))
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(found), 2):
            s = frozenset(two_sided_ideal(R, a | b))
            if s not in found:
                found.add(s)
                changed = True
    return found


def span_products(R, A, B):
    mul = R.mul.tolist()
    return additive_span(R, {mul[a][b] for a in A for b in B})


def gf_rank(p, A):
    """Rank of an integer matrix over Z/p by Gaussian elimination."""
    M = [[v % p for v in row] for row in A]
    rank, rows = 0, len(M)
    cols = len(M[0]) if M else 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if M[r][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], p - 2, p)
        M[rank] = [v * inv % p for v in M[rank]]
        for r in range(rows):
            if r != rank and M[r][c]:
                f = M[r][c]
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def chain_le_brute(R, a_terms, b_terms):
    """Every a_i is below some b_j (definition unfolding over all s, t)."""
    return all(any(brute_subordinate(R, x, y) for y in b_terms) for x in a_terms)


def directed_downsets(leq, n):
    """All nonempty, downward closed, upward directed subsets of {0..n-1}."""
    out = []
    for mask in range(1, 1 << n):
        S = [i for i in range(n) if mask >> i & 1]
        if not all(mask >> j & 1 for i in S for j in range(n) if leq[j][i]):
            continue
        if all(any(leq[a][c] and leq[b][c] for c in S) for a in S for b in S):
            out.append(frozenset(S))
    return out


# ---- numpy brute force for 2x2 subordination (all s, t enumerated)

def _np_matmul(R, A, B):
    """Table matrix product for stacks A[..., n, k], B[..., k, m]."""
    import numpy as np
    add, mul = np.asarray(R.add), np.asarray(R.mul)
    prod = mul[A[..., :, :, None], B[..., None, :, :]]      # [..., n, k, m]
    acc = prod[..., 0, :]
    for k in range(1, prod.shape[-2]):
        acc = add[acc, prod[..., k, :]]
    return acc


def _all_np(R, n):
    import numpy as np
    g = np.array(list(itertools.product(range(R.size), repeat=n * n)), dtype=np.int64)
    return g.reshape(-1, n, n)


_tables = {}


def mat2_table(R):
    """Product table of all 2x2 matrices, indexed by base-q encoding of the entries."""
    import numpy as np
    if R.meta in _tables:
        return _tables[R.meta]
    Ms = _all_np(R, 2)
    N, q = len(Ms), R.size
    weights = q ** np.arange(3, -1, -1)
    T = np.empty((N, N), dtype=np.int32)
    for lo in range(0, N, 256):
        A = Ms[lo:lo + 256]
        P = _np_matmul(R, A[:, None], Ms[None, :])            # [a, b, 2, 2]
        T[lo:lo + 256] = (P.reshape(len(A), N, 4) * weights).sum(-1)
    _tables[R.meta] = T
    return T


def _code(R, m):
    q = R.size
    flat = [v for row in pad(R, m, 2, 2) for v in row]
    return ((flat[0] * q + flat[1]) * q + flat[2]) * q + flat[3]


def np_subordinate(R, x, y):
    """x = s.y.t for some 2x2 s, t (x, y padded to 2x2): every s and t is tried."""
    import numpy as np
    T = mat2_table(R)
    yt = np.unique(T[_code(R, y)])          # y.t for every t
    return bool((T[:, yt] == _code(R, x)).any())
def chain_le_unfold(R, a_terms, b_terms):
    """For all i there is j with a_i below b_j."""
    return all(any(np_subordinate(R, x, y) for y in b_terms) for x in a_terms)


def chain_prec_unfold(R, a_terms, b_terms):
    """One index j of b dominates every term of a."""
    return any(all(np_subordinate(R, x, y) for x in a_terms) for y in b_terms)
