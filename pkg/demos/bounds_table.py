"""
How the constants grow
======================

Print certified enclosures of the field constants and the bounds for a
few instance sizes.
"""

# %%
from smallzeros import a_constant, b_constant
from smallzeros.constants import bounds_from_heights

print(" N      A(N) lo             A(N) hi             B(N,1) hi")
for N in range(1, 7):
    a, b = a_constant(N), b_constant(N, 1)
    print(f"{N:2d}  {float(a.lo):18.12g}  {float(a.hi):18.12g}  {float(b.hi):14.6g}")

# %%
# For fixed heights the strongest bound is usually the ordered one.
print("\n N  M   bound_13     bound_14     bound_15     bound_star")
for N in (1, 2, 3):
    for M in (1, 2, 3):
        rep = bounds_from_heights(N, 5, [2] * M)
        vals = [rep.bound_13, rep.bound_14, rep.bound_15, rep.bound_star]
        print(f"{N:2d} {M:2d}  " + "  ".join(f"{float(v.hi):11.4g}" for v in vals))
