import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ring
from cuntzring.classes import (Status, check_normal_chain, is_dense, is_left_normal,
                               is_weakly_s_unital, left_normal_witness, normal_chain)
from cuntzring.errors import DimensionMismatch, RingMismatch
from cuntzring.matrices import (RingMatrix, SubordinationWitness, compose_witnesses, direct_sum,
                                equiv1, mat_ops, subordinate, sum_witness)
import oracles

EVEN16 = "subring_nonunital(zmod(16),{2})"
SMALL = ["zmod(4)", "zmod(6)", "gf(2)", "upper(2,zmod(2))", EVEN16, "zero_mult(4)", "product(zmod(2),zmod(4))"]


def M(R, rows):
    return RingMatrix.from_array(R, rows)


# ---- mat_ops

def test_direct_sum_z6():
    R = ring("zmod(6)")
    assert mat_ops(M(R, [[2]]), M(R, [[3]]), "direct_sum") == M(R, [[2, 0], [0, 3]])


def test_square_of_two_vanishes_mod_4():
    R = ring("zmod(4)")
    assert mat_ops(M(R, [[2]]), M(R, [[2]]), "mul") == M(R, [[0]])


def test_matrix_units_gf2():
    R = ring("gf(2)")
    assert M(R, [[1, 0], [0, 0]]) @ M(R, [[0, 1], [0, 0]]) == M(R, [[0, 1], [0, 0]])


def test_shape_and_ring_errors():
    R = ring("zmod(4)")
    with pytest.raises(DimensionMismatch):
        M(R, [[1]]) + M(R, [[1, 0]])
    with pytest.raises(RingMismatch):
        M(R, [[1]]) @ M(ring("zmod(6)"), [[1]])


# ---- subordinate

def test_z6_two_below_four():
    R = ring("zmod(6)")
    x, y = M(R, [[2]]), M(R, [[4]])
    w = subordinate(x, y)
    assert w is not None and w.verify(x, y)
    assert (4 * 4 * 2) % 6 == 2            # the hand witness s=4, t=2
    assert SubordinationWitness(M(R, [[4]]), M(R, [[2]])).verify(x, y)


@pytest.mark.parametrize("expr", SMALL)
def test_zero_is_below_everything(expr):
    R = ring(expr)
    for y in range(R.size):
        w = subordinate(M(R, [[R.zero]]), M(R, [[y]]))
        assert w is not None and w.verify(M(R, [[R.zero]]), M(R, [[y]]))


def test_eight_not_below_eight_in_even_ring():
    R = ring(EVEN16)
    eight = R.index_of("8")
    assert subordinate(M(R, [[eight]]), M(R, [[eight]])) is None
    assert not oracles.brute_subordinate(R, [[eight]], [[eight]])


@pytest.mark.parametrize("expr", ["zmod(4)", "zmod(6)", "gf(2)", EVEN16, "zero_mult(4)", "upper(2,zmod(2))"])
def test_scalar_subordination_matches_brute_force(expr):
    R = ring(expr)
    for x, y in itertools.product(range(R.size), repeat=2):
        w = subordinate(M(R, [[x]]), M(R, [[y]]))
        assert (w is not None) == oracles.brute_subordinate(R, [[x]], [[y]])
        if w is not None:
            assert w.verify(M(R, [[x]]), M(R, [[y]]))


@pytest.mark.parametrize("expr", ["zmod(4)", "gf(2)", "zero_mult(2)"])
def test_2x2_subordination_matches_brute_force(expr):
    R = ring(expr)
    rng = np.random.default_rng(7)
    for _ in range(6):
        x = rng.integers(0, R.size, (2, 2)).tolist()
        y = rng.integers(0, R.size, (2, 2)).tolist()
        w = subordinate(M(R, x), M(R, y))
        assert (w is not None) == oracles.brute_subordinate(R, x, y)


# ---- equiv1

def test_rank_one_units_equivalent_gf2():
    R = ring("gf(2)")
    assert equiv1(M(R, [[1, 0], [0, 0]]), M(R, [[0, 1], [0, 0]]))


def test_two_not_equivalent_to_zero_mod_4():
    R = ring("zmod(4)")
    assert not equiv1(M(R, [[2]]), M(R, [[0]]))


@pytest.mark.parametrize("expr", ["zmod(4)", "gf(3)", "upper(2,zmod(2))"])
def test_reflexive_in_unital_rings(expr):
    R = ring(expr)
    for x in range(R.size):
        assert equiv1(M(R, [[x]]), M(R, [[x]]))


def test_gf2_equivalence_is_rank():
    R = ring("gf(2)")
    mats = [np.array(m).reshape(2, 2) for m in itertools.product(range(2), repeat=4)]
    for a in mats[::3]:
        for b in mats[::2]:
            assert equiv1(M(R, a), M(R, b)) == (oracles.gf_rank(2, a.tolist()) == oracles.gf_rank(2, b.tolist()))


# ---- invariants as properties

def _matrix(R, n, draw):
    return M(R, [[draw(st.integers(0, R.size - 1)) for _ in range(n)] for _ in range(n)])


@st.composite
def ring_and_triple(draw):
    R = ring(draw(st.sampled_from(["zmod(4)", "zmod(6)", "gf(2)", "upper(2,zmod(2))"])))
    n = draw(st.integers(1, 2))
    z = _matrix(R, n, draw)
    s1, t1, s2, t2 = (_matrix(R, n, draw) for _ in range(4))
    y = s1 @ z @ t1
    x = s2 @ y @ t2
    return R, x, y, z


@settings(max_examples=40, deadline=None)
@given(ring_and_triple())
def test_transitivity_by_composed_witness(data):
    R, x, y, z = data
    wxy, wyz = subordinate(x, y), subordinate(y, z)
    assert wxy is not None and wyz is not None
    assert compose_witnesses(wxy, wyz, y).verify(x, z)


@settings(max_examples=40, deadline=None)
@given(ring_and_triple())
def test_entry_lemma(data):
    R, a, b, _ = data
    assert subordinate(a, b) is not None
    for e in a.entries:
        assert subordinate(M(R, [[e]]), b) is not None


@settings(max_examples=30, deadline=None)
@given(ring_and_triple(), ring_and_triple())
def test_compatible_with_direct_sum(d1, d2):
    R1, x1, y1, _ = d1
    R2, x2, y2, _ = d2
    if R1.meta != R2.meta:
        return
    w = sum_witness(subordinate(x1, y1), subordinate(x2, y2))
    assert w.verify(direct_sum(x1, x2), direct_sum(y1, y2))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["zmod(4)", "zmod(6)", "gf(2)", EVEN16]), st.data())
def test_block_lemma_explicit_factorization(expr, data):
    R = ring(expr)
    el = st.integers(0, R.size - 1)
    b = [[data.draw(el) for _ in range(2)] for _ in range(2)]
    s = [[data.draw(el) for _ in range(2)] for _ in range(2)]
    t = [[data.draw(el) for _ in range(2)] for _ in range(2)]
    a = [[int(R.mul[R.mul[s[i][j], b[i][j]], t[i][j]]) for j in range(2)] for i in range(2)]
    # a = S (b11 + b12 + b21 + b22) T with S[i, 2i+j] = s_ij and T[2i+j, j] = t_ij
    S = np.full((2, 4), R.zero)
    T = np.full((4, 2), R.zero)
    for i, j in itertools.product(range(2), repeat=2):
        S[i, 2 * i + j] = s[i][j]
        T[2 * i + j, j] = t[i][j]
    big = direct_sum(*(M(R, [[b[i][j]]]) for i in range(2) for j in range(2)))
    assert SubordinationWitness(M(R, S), M(R, T)).verify(M(R, a), big)
    assert subordinate(M(R, a), big) is not None


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["zmod(4)", "zmod(6)", "gf(2)", "upper(2,zmod(2))", "gf(3)"]), st.data())
def test_unital_reflexive(expr, data):
    R = ring(expr)
    x = _matrix(R, data.draw(st.integers(1, 2)), data.draw)
    w = subordinate(x, x)
    assert w is not None and w.verify(x, x)


# ---- ring classes

def test_weakly_s_unital_verdicts():
    assert is_weakly_s_unital(ring("zmod(4)")).status == Status.HOLDS
    v = is_weakly_s_unital(ring(EVEN16))
    assert v.conclusive_failure
    assert str(v.counterexample[0]) == "[2]"
    # oracle: s*2*t only reaches {0, 8}
    assert {(s * 2 * t) % 16 for s in range(0, 16, 2) for t in range(0, 16, 2)} == {0, 8}
    v = is_weakly_s_unital(ring("zero_mult(4)"))
    assert v.conclusive_failure and not v.counterexample[0].is_zero()


def test_dense_verdicts():
    assert is_dense(ring("zmod(6)")).status == Status.HOLDS
    assert is_dense(ring("zero_mult(4)")).status == Status.HOLDS
    v = is_dense(ring(EVEN16))
    assert v.status == Status.FAILS
    assert [str(m) for m in v.counterexample] == ["[8]", "[2]"]
    R = ring(EVEN16)
    e8, e2 = R.index_of("8"), R.index_of("2")
    # oracle: only z in {0, 8} lie below 2, and 8 is below neither of them
    below2 = {z for z in range(R.size) if oracles.brute_subordinate(R, [[z]], [[e2]])}
    assert below2 == {R.zero, e8}
    assert not any(oracles.brute_subordinate(R, [[e8]], [[z]]) for z in below2)


@pytest.mark.parametrize("expr", ["gf(2)", "upper(2,zmod(2))"])
def test_left_normal_up_to_bound(expr):
    v = is_left_normal(ring(expr), B=2)
    assert v.status == Status.HOLDS_UP_TO_BOUND and v.bound == 2


def test_left_normal_witness_z4():
    R = ring("zmod(4)")
    d, e = left_normal_witness(M(R, [[2]]), M(R, [[1]]), M(R, [[1]]))
    a, c = M(R, [[2]]), M(R, [[1]])
    assert (d @ a).same_element(a) and (e @ d).same_element(d) and (c @ e).same_element(e)
    one = M(R, [[1]])
    assert SubordinationWitness(one, one).verify(a, a)   # d = e = 1 is a valid answer


def test_normal_chain_examples():
    R = ring("zmod(6)")
    three = M(R, [[3]])
    ch = normal_chain(three, three, three, 3)
    assert check_normal_chain(three, three, ch)
    assert (three @ three) == three            # the constant chain 3 also works
    Z = M(R, [[0]])
    assert all(d.is_zero() for d in normal_chain(Z, Z, Z, 3))
    F = ring("gf(2)")
    a, one = M(F, [[1, 0], [0, 0]]), RingMatrix.identity(F, 2)
    ch = normal_chain(a, one, one, 3)
    assert check_normal_chain(a, one, ch)
