# %% [markdown]
# # Finite rings and their ideals
# Build a few rings from expressions, list their ideals and sort them into
# the decomposable, pure and quasipure classes.

# %%
from cuntzring import build_ring
from cuntzring.ideals import (build_lattice, check_retract, decomposable_span, enumerate_ideals,
                              is_decomposable, is_pure, is_quasipure, lattice_to_dot, whole)

for expr in ["zmod(4)", "zmod(6)", "upper(2,zmod(2))", "subring_nonunital(zmod(16),{2})"]:
    R = build_ring(expr)
    print(f"{expr}: {R.size} elements, {'unital' if R.unit is not None else 'no unit'}")
    for I in enumerate_ideals(R):
        print(f"  {I.name():40s} dec={is_decomposable(I).value!s:5s} pure={is_pure(I)!s:5s} "
              f"qp={is_quasipure(I).value}")

# %% [markdown]
# The even residues mod 16 form a ring without unit.  Its triple products
# only reach {0, 8}, so the ring is not decomposable as an ideal of itself.

# %%
E = build_ring("subring_nonunital(zmod(16),{2})")
print("span(RIR) =", [E.labels[i] for i in decomposable_span(whole(E))])

# %% [markdown]
# Stable powers send decomposable ideals onto quasipure ones.

# %%
rep = check_retract(build_ring("zmod(16)"))
print("retract checks pass:", rep.ok)
R16 = build_ring("zmod(16)")
for I, P in rep.psi.items():
    print(f"  {[R16.labels[i] for i in I]} -> {[R16.labels[i] for i in P]}")

# %%
print(lattice_to_dot(build_lattice(build_ring("zmod(6)"))))
