import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import CORPUS, corpus, ring, unital_corpus
from cuntzring.errors import NotIdempotent
from cuntzring.ideals import (build_lattice, check_retract, decomposable_span, enumerate_ideals,
                              find_trace_idempotent, ideal_meet, ideal_product,
                              is_decomposable, is_idempotent, is_pure, is_quasipure, lattice_ops,
                              lattice_to_dot, make_ideal, stable_power, trace_ideal, whole, zero_ideal)
from cuntzring.matrices import RingMatrix
import oracles

EVEN16 = "subring_nonunital(zmod(16),{2})"
UPPER = "upper(2,zmod(2))"


def upper_col_ideal():
    R = ring(UPPER)
    return make_ideal(R, [R.index_of(f"[[0,{b}],[0,{d}]]") for b in (0, 1) for d in (0, 1)])


def elems(R, *labels):
    return sorted(R.index_of(str(l)) for l in labels)


# ---- enumeration

@pytest.mark.parametrize("expr, expected", [
    ("zmod(6)", [{0}, {0, 3}, {0, 2, 4}, set(range(6))]),
    ("zmod(4)", [{0}, {0, 2}, set(range(4))]),
    ("gf(3)", [{0}, {0, 1, 2}]),
])
def test_enumerate_examples(expr, expected):
    got = [set(I.elements) for I in enumerate_ideals(ring(expr))]
    assert sorted(map(sorted, got)) == sorted(map(sorted, expected))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_enumeration_matches_closure_oracle(name):
    R = corpus()[name]
    got = {frozenset(I.elements) for I in enumerate_ideals(R)}
    assert got == oracles.all_ideals(R)


# ---- pure / idempotent

def test_pure_examples():
    R = ring("zmod(6)")
    assert is_pure(make_ideal(R, [0, 2, 4]))
    assert (4 * 2) % 6 == 2 and (4 * 4) % 6 == 4
    assert not is_pure(upper_col_ideal())
    for R in corpus().values():
        assert is_pure(zero_ideal(R))


@pytest.mark.parametrize("name", ["z4", "z6", "z12", "u2z2", "m2f2", "even16", "z2xz4"])
def test_pure_matches_oracle(name):
    R = corpus()[name]
    mul = R.mul.tolist()
    for I in enumerate_ideals(R):
        brute = all(any(mul[s][y] == y for s in I.elements) for y in I.elements)
        assert is_pure(I) == brute


def test_idempotent_examples():
    assert not is_idempotent(make_ideal(ring("zmod(4)"), [0, 2]))
    assert is_idempotent(make_ideal(ring("zmod(6)"), [0, 3]))
    assert is_idempotent(zero_ideal(ring("zmod(6)")))


# ---- decomposable / quasipure

@pytest.mark.parametrize("name", sorted(unital_corpus()))
def test_every_ideal_of_unital_ring_decomposable(name):
    for I in enumerate_ideals(corpus()[name]):
        d = is_decomposable(I, "both")
        assert d.value is True


def test_even_ring_not_decomposable():
    R = ring(EVEN16)
    d = is_decomposable(whole(R), "both")
    assert d.value is False
    assert decomposable_span(whole(R)) == elems(R, 0, 8)
    # oracle: triple products of evens mod 16 span {0, 8}
    prods = {(a * b * c) % 16 for a, b, c in itertools.product(range(0, 16, 2), repeat=3)}
    assert prods == {0, 8}


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_decomposable_criterion_matches_span_oracle(name):
    R = corpus()[name]
    for I in enumerate_ideals(R):
        RI = oracles.span_products(R, range(R.size), I.elements)
        RIR = oracles.span_products(R, RI, range(R.size))
        assert is_decomposable(I).value == (set(I.elements) <= RIR)
    assert is_decomposable(zero_ideal(R)).value


def test_quasipure_examples():
    I = make_ideal(ring("zmod(4)"), [0, 2])
    q = is_quasipure(I, "all")
    assert q.value is False and set(q.evidence["values"].values()) == {False}
    J = upper_col_ideal()
    assert is_quasipure(J, "all").value is True and not is_pure(J)
    for R in corpus().values():
        assert is_quasipure(zero_ideal(R)).value


@pytest.mark.parametrize("name", sorted(unital_corpus()))
def test_quasipure_modes_agree(name):
    for I in enumerate_ideals(corpus()[name]):
        q = is_quasipure(I, "all")
        vals = {v for v in q.evidence["values"].values() if v is not None}
        assert len(vals) == 1
        assert q.value == (oracles.span_products(I.ring, I.elements, I.elements) == set(I.elements))


@pytest.mark.parametrize("name", sorted(unital_corpus()))
def test_class_implications(name):
    for I in enumerate_ideals(corpus()[name]):
        qp, d = is_quasipure(I).value, is_decomposable(I).value
        assert not qp or d
        assert not is_pure(I) or qp
        assert not is_idempotent(I) or d


# ---- stable power

def test_stable_power_examples():
    assert stable_power(make_ideal(ring("zmod(4)"), [0, 2])).elements == (0,)
    assert stable_power(make_ideal(ring("zmod(6)"), [0, 2, 4])).elements == (0, 2, 4)
    R = ring(EVEN16)
    assert stable_power(whole(R)).elements == (R.zero,)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_stable_power_properties(name):
    R = corpus()[name]
    ideals = enumerate_ideals(R)
    for I in ideals:
        P = stable_power(I)
        assert is_idempotent(P) and P <= I
        join = set()
        for J in ideals:
            if J <= I and is_idempotent(J):
                join = oracles.additive_span(R, join | set(J.elements))
        assert set(P.elements) == (join or {R.zero})


# ---- lattice operations

def test_lattice_op_examples():
    R = ring("zmod(12)")
    assert lattice_ops(make_ideal(R, [0, 4, 8]), make_ideal(R, [0, 6]), "meet_d").elements == (0,)
    R = ring("zmod(6)")
    assert lattice_ops(make_ideal(R, [0, 2, 4]), make_ideal(R, [0, 3]), "join_d") == whole(R)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_meet_sandwich(name):
    R = corpus()[name]
    D = [I for I in enumerate_ideals(R) if is_decomposable(I).value]
    for I, J in itertools.product(D, repeat=2):
        m = lattice_ops(I, J, "meet_d")
        assert ideal_product(I, J) <= m <= ideal_meet(I, J)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["z4", "z6", "z12", "u2z2", "z2xz4", "m2f2", "z8"]), st.data())
def test_lattice_laws(name, data):
    R = corpus()[name]
    for kind in ("d", "qp"):
        L = [I for I in enumerate_ideals(R) if (is_decomposable(I).value if kind == "d" else is_idempotent(I))]
        a, b, c = (data.draw(st.sampled_from(L)) for _ in range(3))
        meet = lambda x, y: lattice_ops(x, y, "meet_" + kind)
        join = lambda x, y: lattice_ops(x, y, "join_" + kind)
        assert meet(a, b) == meet(b, a) and join(a, b) == join(b, a)
        assert meet(meet(a, b), c) == meet(a, meet(b, c))
        assert join(join(a, b), c) == join(a, join(b, c))
        assert meet(a, join(a, b)) == a and join(a, meet(a, b)) == a


def test_dot_for_z6():
    dot = lattice_to_dot(build_lattice(ring("zmod(6)")))
    assert dot.count("[label=") == 4 and dot.count("->") == 4


# ---- retract

def test_retract_z4():
    rep = check_retract(ring("zmod(4)"))
    assert rep.ok
    assert rep.psi[(0, 2)] == (0,) and rep.psi[(0, 1, 2, 3)] == (0, 1, 2, 3)


def test_retract_z6_identity():
    rep = check_retract(ring("zmod(6)"))
    assert rep.ok and rep.lattice_sizes == (4, 4)
    assert all(k == v for k, v in rep.psi.items())


def test_retract_gf2():
    rep = check_retract(ring("gf(2)"))
    assert rep.ok and rep.lattice_sizes == (2, 2)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_retract_corpus(name):
    assert check_retract(corpus()[name]).ok


# ---- trace ideals

def test_trace_examples():
    R = ring(UPPER)
    e = RingMatrix.of(R, R.labels[R.index_of("[[0,0],[0,1]]")])
    assert trace_ideal(e) == upper_col_ideal()
    M = ring("matrix(2,gf(2))")
    assert trace_ideal(RingMatrix.identity(M, 1)) == whole(M)
    assert trace_ideal(RingMatrix.zeros(M, 1, 1)) == zero_ideal(M)
    with pytest.raises(NotIdempotent):
        trace_ideal(RingMatrix.from_array(ring("zmod(4)"), [[2]]))


@pytest.mark.parametrize("name", sorted(unital_corpus()))
def test_trace_of_idempotents_quasipure(name):
    R = corpus()[name]
    if R.size > 16:
        pytest.skip("2x2 idempotent sweep is limited to 16 elements")
    mats = itertools.product(range(R.size), repeat=4) if R.size <= 8 else \
        (tuple(v) for v in np.random.default_rng(1).integers(0, R.size, (2000, 4)))
    found = 0
    for flat in mats:
        e = RingMatrix.from_array(R, np.array(flat).reshape(2, 2))
        if (e @ e).same_element(e):
            found += 1
            assert is_quasipure(trace_ideal(e)).value
    assert found >= 2


@pytest.mark.parametrize("name", sorted(unital_corpus()))
def test_every_quasipure_ideal_is_a_trace(name):
    for I in enumerate_ideals(corpus()[name]):
        if is_quasipure(I).value:
            e, status = find_trace_idempotent(I)
            assert e is not None and trace_ideal(e) == I
