"""
One quadratic form, one hyperplane
==================================

Walk through every route the single-condition solver can take, printing the
point it builds and how its height compares with the certified bound.
"""

# %%
# A ternary form and a plane. ``X0^2 - X1^2`` vanishes on two planes through
# the X2 axis, so it has plenty of rational zeros.
from smallzeros import LinearForm, QuadraticForm, solve_single
from smallzeros.constants import single_bound
from smallzeros.heights import form_height, inhomogeneous_height

F = QuadraticForm.diagonal(1, -1, 0)
L = LinearForm((1, 1, 1))


def show(F, L, witness=None):
    sol = solve_single(F, L, witness)
    u = sol.point
    bound = single_bound(F.dim - 1, form_height(F), form_height(L))
    print(f"F = {F}")
    print(f"L = {L}")
    print(f"  route  {sol.path.value}")
    print(f"  u      {tuple(str(c) for c in u)}")
    print(f"  F(u) = {F(u)}, L(u) = {L(u)}")
    print(f"  h(u) = {inhomogeneous_height(u)}  <=  {float(bound.hi):.4g}")
    print(f"  trace  {sol.trace()}\n")


show(F, L)

# %%
# With a binary form there is nothing to reduce; the two lines through the
# origin are read off directly and the one missing ``L = 0`` is kept.
show(QuadraticForm.diagonal(1, -1), LinearForm((1, -1)))

# %%
# When the smallest zero lies on the hyperplane the solver reflects another
# zero through it. ``X0^2 + 2 X1 X2`` meets the plane ``X0 = 0`` in its
# smallest zeros, so a reflection is needed.
show(QuadraticForm(((1, 0, 0), (0, 0, 1), (0, 1, 0))), LinearForm((1, 0, 0)))

# %%
# A degenerate form with a radical. Its first zero is the singular point
# (1, 0, 0), so the solver restricts to a hyperplane and lifts back.
show(QuadraticForm.diagonal(0, 1, -1), LinearForm((0, 1, 0)), witness=(0, 1, 1))
