import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ring
from cuntzring.chains import quasipure_chain
from cuntzring.errors import HypothesisFailed
from cuntzring.ideals import make_ideal, whole, zero_ideal
from cuntzring.matrices import RingMatrix, direct_sum, subordinate
from cuntzring.quotients import (block_lift, check_block_stages, cumulative_blocks,
                                 decomposable_ideals, lift_subordination, projection,
                                 simulate_block_inputs, transfer_report)
import oracles


def M(R, rows):
    return RingMatrix.from_array(R, rows)


# ---- lift_subordination

def test_lift_three_below_one_mod_4():
    R = ring("zmod(4)")
    I = make_ideal(R, [0, 2])
    cert = lift_subordination(R, I, M(R, [[3]]), M(R, [[1]]))
    assert cert.verify(I) and cert.z.is_zero()


def test_lift_two_over_zero_mod_4():
    R = ring("zmod(4)")
    I = make_ideal(R, [0, 2])
    x, y = M(R, [[2]]), M(R, [[0]])
    cert = lift_subordination(R, I, x, y)
    assert cert.verify(I) and not cert.z.is_zero()
    assert cert.witness.verify(x, direct_sum(y, cert.z))
    assert subordinate(x, y) is None       # so a nonzero z is necessary


@pytest.mark.parametrize("expr", ["zmod(4)", "zmod(6)", "upper(2,zmod(2))", "zmod(8)"])
def test_lift_zero_gives_zero(expr):
    R = ring(expr)
    for I in decomposable_ideals(R):
        for y in range(R.size):
            cert = lift_subordination(R, I, M(R, [[R.zero]]), M(R, [[y]]))
            assert cert.verify(I) and cert.z.is_zero()


def test_lift_requires_decomposable():
    R = ring("subring_nonunital(zmod(16),{2})")
    with pytest.raises(HypothesisFailed):
        lift_subordination(R, whole(R), M(R, [[0]]), M(R, [[0]]))


@pytest.mark.parametrize("expr", ["zmod(4)", "zmod(6)", "zmod(8)", "upper(2,zmod(2))", "product(zmod(2),zmod(4))",
                                  "zero_mult(4)"])
def test_scalar_lifts_exhaustive(expr):
    R = ring(expr)
    for I in decomposable_ideals(R):
        pi = projection(I)
        for x, y in itertools.product(range(R.size), repeat=2):
            xq, yq = pi(M(R, [[x]])), pi(M(R, [[y]]))
            if not oracles.brute_subordinate(pi.Q, xq.to_json(), yq.to_json()):
                continue
            cert = lift_subordination(R, I, M(R, [[x]]), M(R, [[y]]), shortcut=False)
            assert cert.verify(I)


# ---- cumulative blocks

@pytest.mark.parametrize("expr", ["zmod(4)", "zmod(6)", "upper(2,zmod(2))"])
def test_cumulative_blocks_increase(expr):
    R = ring(expr)
    for I in decomposable_ideals(R):
        zs = [M(R, [[e]]) for e in I.elements[:3]]
        ws, proofs = cumulative_blocks(I, zs, len(zs))
        assert all(p is not None and p.verify(a, b) for p, a, b in zip(proofs, ws, ws[1:]))
        assert all(w.entries_in(I.elements) for w in ws)


# ---- block lift

def test_block_lift_all_zero():
    R = ring("zmod(6)")
    I = make_ideal(R, [0, 3])
    Z = M(R, [[0]])
    stages = [{"x": Z, "y": Z, "r": Z} for _ in range(3)]
    chains = [quasipure_chain(I, Z) for _ in range(3)]
    out = block_lift(stages, chains)
    assert len(out) == 3 and check_block_stages(out)
    assert all(s.X.is_zero() for s in out)


def test_block_lift_single_stage():
    R = ring("zmod(6)")
    I = make_ideal(R, [0, 3])
    x = M(R, [[1]])
    out = block_lift([{"x": x, "y": None, "r": M(R, [[0]])}], [quasipure_chain(I, M(R, [[3]]))])
    assert len(out) == 1 and out[0].Y is None and check_block_stages(out)


def test_block_lift_z6_forward_simulation():
    R = ring("zmod(6)")
    I = make_ideal(R, [0, 3])
    rng = np.random.default_rng(3)
    for _ in range(10):
        stages, chains = simulate_block_inputs(R, I, 3, rng)
        out = block_lift(stages, chains)
        assert len(out) == 3
        for a, b in zip(out, out[1:]):
            assert (a.Y @ b.X @ a.X).same_element(a.X)


def test_block_lift_rejects_bad_hypothesis():
    R = ring("zmod(6)")
    I = make_ideal(R, [0, 3])
    one, zero = M(R, [[1]]), M(R, [[0]])
    stages = [{"x": one, "y": zero, "r": zero}, {"x": one, "y": None, "r": zero}]
    with pytest.raises(HypothesisFailed):
        block_lift(stages, [quasipure_chain(I, zero)] * 2)


# ---- transfer report

def test_transfer_z4():
    R = ring("zmod(4)")
    rep = transfer_report(R, make_ideal(R, [0, 2]), samples=16)
    assert rep.ok and rep.counts["c"] > 0 and rep.counts["lift_inconclusive"] == 0


@pytest.mark.parametrize("expr", ["zmod(4)", "zmod(6)"])
def test_transfer_trivial_ideals(expr):
    R = ring(expr)
    for I in (zero_ideal(R), whole(R)):
        rep = transfer_report(R, I, samples=8)
        assert rep.ok


def test_quotient_by_whole_lifts_to_zero_padding():
    R = ring("zmod(6)")
    I = whole(R)
    pi = projection(I)
    assert pi.Q.size == 1
    cert = lift_subordination(R, I, M(R, [[5]]), M(R, [[0]]), shortcut=False)
    assert cert.verify(I)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["zmod(4)", "zmod(6)", "upper(2,zmod(2))", "zmod(8)"]), st.data())
def test_certificates_replay(expr, data):
    R = ring(expr)
    I = data.draw(st.sampled_from(decomposable_ideals(R)))
    pi = projection(I)
    n = data.draw(st.integers(1, 2))
    el = st.integers(0, R.size - 1)
    mat = lambda: M(R, [[data.draw(el) for _ in range(n)] for _ in range(n)])
    y, s, t = mat(), mat(), mat()
    # x is chosen so that pi(x) = pi(s y t): add any matrix over I
    noise = M(R, [[data.draw(st.sampled_from(I.elements)) for _ in range(n)] for _ in range(n)])
    x = s @ y @ t + noise
    cert = lift_subordination(R, I, x, y)
    assert cert.verify(I)
    assert pi(x).same_element(pi(s @ y @ t))
