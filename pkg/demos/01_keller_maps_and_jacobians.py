#!/usr/bin/env python3
"""Tour of the exact polynomial-map basics.

Builds a few small endomorphisms, prints their Jacobian matrices and
determinants, checks the Keller condition, and shows why positive
characteristic behaves differently (the map x - x^q is the zero map on
points of F_q while its Jacobian determinant is 1).

Run:  python demos/01_keller_maps_and_jacobians.py
"""

from kellerlab import PolyMap, PrimeField, QQ, euler_check, parse, render


def pmap(field, nvars, *texts):
    return PolyMap(field, nvars, [parse(t, nvars, field) for t in texts])


def show(title):
    print()
    print(title)
    print("-" * len(title))


show("An injective quadratic map that is not invertible")
F = pmap(QQ, 3, "x1 + x2*x3", "x2 - x1*x3", "x3")
print("F =", F)
print("jac F =", F.jacobian())
print("det jac F =", render(F.det_jacobian()))
print("Keller (det in K*)?", F.is_keller())
print("The determinant x3^2 + 1 never vanishes on Q^3, yet it is not a")
print("constant, so F is not a Keller map; F is injective over the reals")
print("but has no polynomial inverse.")

show("A triangular shear is Keller")
S = pmap(QQ, 2, "x1", "x2 + x1^2")
print("S =", S, " det jac S =", render(S.det_jacobian()), " Keller?", S.is_keller())

show("Positive characteristic: x - x^2 over F_2")
F2 = PrimeField(2)
Z = pmap(F2, 1, "x1 - x1^2")
print("Z =", Z)
print("values on F_2:", [Z.evaluate([t]) for t in range(2)], "(the zero map on points)")
print("det jac Z =", render(Z.det_jacobian()), "-> Keller?", Z.is_keller())
print("The derivative of x^2 is 2x = 0 in characteristic 2, which is why a")
print("unit Jacobian cannot force injectivity there.")

show("Homogeneous decomposition and the Euler identity")
C = pmap(QQ, 1, "x1 + x1^3")
parts = C.homogeneous_decomposition()
print("x1 + x1^3 decomposes as", {k: str(v) for k, v in parts.items()})
h = parse("x1^2 * x2", 2, QQ)
print("Euler identity for x1^2*x2 at degree 3:", euler_check(h, 3))
print("(sum_j x_j dh/dx_j = 3h holds exactly)")

show("Chain rule, exactly")
G = pmap(QQ, 2, "x1 + x2^2", "x2")
lhs = S.compose(G).jacobian()
rhs = S.jacobian().substitute(list(G.components)) @ G.jacobian()
print("jac(S o G) == (jac S)|_G * jac G ?", lhs == rhs)
