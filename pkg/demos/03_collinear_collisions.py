#!/usr/bin/env python3
"""Collisions of a polynomial map on lines, and what they certify.

When a map takes the same value at r collinear points (with a full-rank
generalized Vandermonde matrix on the parameters), its Jacobian determinant
cannot be a nonzero constant -- there is even a scalar a on the line where
the Jacobian kills the direction.  This demo finds such witnesses over small
prime fields, shows the rank-drop parameter, and contrasts the excluded
characteristic-p cases.

Run:  python demos/03_collinear_collisions.py
"""

from kellerlab import (
    PolyMap,
    PrimeField,
    QQ,
    collision_search,
    find_rank_drop,
    verify_coefficient_rank,
    line_injectivity,
    line_restriction,
    parse,
    render,
)
from kellerlab.errors import PreconditionFailed

F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)


def pmap(field, nvars, *texts):
    return PolyMap(field, nvars, [parse(t, nvars, field) for t in texts])


def show(title):
    print()
    print(title)
    print("-" * len(title))


show("A collision and its rank-drop witness over F_5")
F = pmap(F5, 2, "x1^2", "x2")
print("F =", F, "with F(1,0) = F(4,0) =", F.evaluate([1, 0]))
line = line_restriction(F, [1, 0], 1, degrees=[0, 1, 2])
print("restriction G(t) = F(t b) - F(b):  C =", line.C, "degrees", line.degrees)
print("coefficient-matrix conclusion holds?", verify_coefficient_rank(line, [1, 4]))
drop = find_rank_drop(F, [1, 0], [1, 4], [0, 1, 2])
print("rank-drop parameter:", drop.value, "(derivative", drop.derivative.render() + ")")
print("det jac F =", render(F.det_jacobian()), "-> not a unit, as certified")

show("Exhaustive search over F_3: the cubic zero map")
Z3 = pmap(F3, 1, "x1 - x1^3")
for w in collision_search(Z3, 3):
    print("witness:", w)
print("det jac =", render(Z3.det_jacobian()), "is a unit, but char 3 divides r = 3,")
print("so the unit-determinant obstruction does not apply: the excluded case.")

show("The same exclusion over F_2")
Z2 = pmap(F2, 1, "x1 - x1^2")
for w in collision_search(Z2, 2):
    print("witness:", w)

show("Why the full-rank hypothesis matters (degrees 0, 1, q, q+1 over F_q)")
try:
    find_rank_drop(Z3, [1], [0, 1, 2], [0, 1, 3, 4])
except PreconditionFailed as exc:
    print("hypothesis fails:", exc)
print("Over F_3, t^3 = t pointwise, so the (0,1,3) rows can never reach rank 3.")

show("Line injectivity, exhaustive over F_3")
S = pmap(F3, 2, "x1", "x2 + x1^2")
print("shear on the diagonal line:", line_injectivity(S, [1, 1]))
print("zero map on its line:", line_injectivity(Z2, [1]))

show("Line injectivity over Q (sound, flagged when not a proof)")
inc = pmap(QQ, 1, "x1 + x1^3")
print("x + x^3:", line_injectivity(inc, [1]))
col = pmap(QQ, 1, "x1^3 - x1")
print("x^3 - x:", line_injectivity(col, [1]))

show("A rank-drop parameter that only exists in an extension field")
Q4 = pmap(QQ, 1, "x1^4 - x1")
drop = find_rank_drop(Q4, [1], [0, 1], [0, 1, 4])
print("t^4 - t vanishes at 0 and 1; derivative", drop.derivative.render(), "has no")
print("rational root, so the result reports absence:", drop.value)
