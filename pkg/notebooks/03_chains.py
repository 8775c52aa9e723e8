# %% [markdown]
# # Increasing chains of matrices
# Chains are compared by domination; quasipure ideals produce chains with
# explicit witnesses x_n = y_{n+1} x_{n+1} x_n.

# %%
from cuntzring import build_ring
from cuntzring.chains import (chain_add, chain_equiv, chain_rel, check_s_witnesses, constant_chain,
                              interpolate_dense, make_chain, quasipure_chain, s_closure_check,
                              s_stability)
from cuntzring.ideals import make_ideal
from cuntzring.matrices import RingMatrix

F = build_ring("gf(2)")
r1 = constant_chain(RingMatrix.from_array(F, [[1, 0], [0, 0]]))
r2 = constant_chain(RingMatrix.identity(F, 2))
for rel in ("le", "prec", "equiv"):
    print(rel, chain_rel(r1, r2, rel).holds)

# %%
R = build_ring("zmod(6)")
I = make_ideal(R, [0, 3])
c = quasipure_chain(I, RingMatrix.from_array(R, [[3]]))
print("terms:", [str(t) for t in c.terms])
print("witnesses check:", check_s_witnesses(c), "stability:", s_stability(c, I)["consistent"])

# %%
a = quasipure_chain(make_ideal(R, [0, 2, 4]), RingMatrix.from_array(R, [[2]]))
t = s_closure_check([a, chain_add(a, c)])
print("closure equals a + c:", chain_equiv(t, chain_add(a, c)))

# %%
g = make_chain([RingMatrix.from_array(F, [[1, 0], [0, 0]]), RingMatrix.identity(F, 2)])
print("interpolants:", [[str(m) for m in z.terms] for z in interpolate_dense(g)])
