# %% [markdown]
# # Ordered monoids, their interval completions and limits

# %%
import numpy as np

from cuntzring import cu
from cuntzring.cu import INF, NAT, CuStructure, SimplePoM

S = cu.lambda_sigma(SimplePoM([NAT, NAT])).structure
x, y = np.array([2, INF]), np.array([3, 1])
show = lambda v: tuple("inf" if a >= INF else int(a) for a in v)
print("x + y =", show(S.add(x, y)), " x <= y:", bool(S.leq(x, y)))
print("interval check at truncation 5:", cu.nat_interval_check(2, 5))

# %% [markdown]
# The axiom checker on the extended naturals and on deliberately broken copies.

# %%
print("axioms:", cu.check_cu_axioms(CuStructure([NAT] * 2)).ok)
for m in cu.seeded_mutants(CuStructure([NAT])):
    print(f"  mutant {m.name}: fails {cu.check_cu_axioms(m).failed()}")

# %%
q = cu.cu_ideal_ops(CuStructure([NAT, NAT]), "quotient", {1})
print("quotient rank:", q.structure.k, " sample map:", [(show(r), show(i)) for r, i in list(q.iso.items())[:4]])

# %% [markdown]
# A direct system given by one order-preserving endomorphism, its colimit,
# and the checks that certify it.

# %%
P = cu.chain(5)
system = cu.endo_chain(P, [0, 2, 4, 4, 4])
col = cu.pom_colimit(system)
print("colimit labels:", col.pom.labels)
print("limit certified:", cu.check_cu_limit(system, col.pom, col.maps, col.window).ok)
print("continuity:", cu.check_continuity(system).ok)
big, maps = cu.enlarged_candidate(col)
print("enlarged candidate rejected:", not cu.check_cu_limit(system, big, maps, col.window).ok)
