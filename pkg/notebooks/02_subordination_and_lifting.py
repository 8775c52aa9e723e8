# %% [markdown]
# # Subordination of matrices and lifting through quotients
# x is subordinate to y when x = s.y.t for matrices s, t over the ring.

# %%
from cuntzring import build_ring
from cuntzring.classes import is_dense, is_weakly_s_unital
from cuntzring.ideals import make_ideal
from cuntzring.matrices import RingMatrix, direct_sum, subordinate
from cuntzring.quotients import lift_subordination, projection

R = build_ring("zmod(4)")
M = lambda rows: RingMatrix.from_array(R, rows)
w = subordinate(M([[2]]), M([[1]]))
print("2 below 1 via", w.left, w.right, w.verify(M([[2]]), M([[1]])))
print("2 below 0:", subordinate(M([[2]]), M([[0]])))

# %% [markdown]
# Modulo I = {0, 2} the element 2 vanishes, so its image is below the image
# of 0.  Back in the ring one needs a correction term z over I.

# %%
I = make_ideal(R, [0, 2])
pi = projection(I)
print("in the quotient:", subordinate(pi(M([[2]])), pi(M([[0]]))) is not None)
cert = lift_subordination(R, I, M([[2]]), M([[0]]))
print("z =", cert.z, "certificate replays:", cert.verify(I),
      cert.witness.verify(M([[2]]), direct_sum(M([[0]]), cert.z)))

# %% [markdown]
# Ring classes: a ring without unit can fail to be weakly s-unital or dense.

# %%
E = build_ring("subring_nonunital(zmod(16),{2})")
v = is_weakly_s_unital(E)
print("weakly s-unital:", v.status, [str(m) for m in v.counterexample])
d = is_dense(E)
print("dense:", d.status, [str(m) for m in d.counterexample])
