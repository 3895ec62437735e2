"""Constant-vector kernels of polynomial Jacobians, linear conjugation that
pushes that kernel onto the last coordinates, the paired r-dimensional map,
and inverse-degree bound reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (
    InconsistentReduction,
    NonSquare,
    NotInvertibleUpToBound,
    TheoremViolation,
)
from .field_linalg import Matrix, complete_to_basis
from .mpoly import MPoly, _grlex
from .polymap import PolyMap
from .inversion import _require_normalized, formal_inverse

CHAR_P_NOTE = "char-p: bound not asserted for positive characteristic"


@dataclass(frozen=True, slots=True)
class KernelReduction:
    """Conjugation data G = T^{-1} F(Tx) with the constant kernel of
    jac(G - x) equal to the span of the last n - r coordinates."""

    T: Matrix
    Tinv: Matrix
    r: int
    conjugated: PolyMap


@dataclass(frozen=True, slots=True)
class DegreeBoundReport:
    """Inverse-degree bookkeeping for a normalized map x + H.

    ``bound`` is d^r for r = n - dim(constant kernel of jac H); the fallback
    ``gabber_bound`` is d^(n-1).  ``escalated`` records whether the tighter
    bound failed and the fallback was needed (over characteristic zero that
    would refute the bound and raises instead of reporting).
    """

    n: int
    d: int
    r: int
    bound: int
    gabber_bound: int
    actual_inverse_degree: Optional[int]
    satisfied: bool
    escalated: bool
    char_p_note: Optional[str]


def constant_kernel(polymap: PolyMap) -> Matrix:
    """Basis of the constant vectors annihilated by the Jacobian identically.

    Each Jacobian row gives one linear constraint per monomial: the vector of
    that monomial's coefficients across the row's entries must kill v.  The
    stacked constraint matrix turns the polynomial-identity kernel into exact
    linear algebra.
    """
    if polymap.m != polymap.n:
        raise NonSquare(f"{polymap.m}x{polymap.n} map")
    field, n = polymap.field, polymap.n
    jac = polymap.jacobian()
    rows = []
    for i in range(polymap.m):
        monomials = set()
        for j in range(n):
            monomials |= set(jac.entry(i, j).terms)
        for mono in sorted(monomials, key=_grlex, reverse=True):
            rows.append([jac.entry(i, j).coefficient(mono) for j in range(n)])
    constraints = Matrix(field, rows, ncols=n)
    return constraints.kernel_basis()


def kernel_conjugate(polymap: PolyMap) -> KernelReduction:
    """Conjugate by a basis completion of the constant kernel of jac(F - x).

    After the conjugation, columns r+1..n of jac(G - x) are identically zero;
    that is re-checked before returning.
    """
    if polymap.m != polymap.n:
        raise NonSquare(f"{polymap.m}x{polymap.n} map")
    field, n = polymap.field, polymap.n
    kernel = constant_kernel(polymap - PolyMap.identity(field, n))
    transform = complete_to_basis(kernel)
    transform_inv = transform.inverse()
    conjugated = (
        PolyMap.linear(transform_inv)
        .compose(polymap)
        .compose(PolyMap.linear(transform))
    )
    r = n - kernel.ncols
    jac = (conjugated - PolyMap.identity(field, n)).jacobian()
    for j in range(r, n):
        for i in range(n):
            if not jac.entry(i, j).is_zero():
                raise TheoremViolation(
                    f"column {j + 1} of the conjugated Jacobian is not zero"
                )
    return KernelReduction(T=transform, Tinv=transform_inv, r=r, conjugated=conjugated)


def pair_reduction(polymap: PolyMap, reduction: KernelReduction) -> PolyMap:
    """The r-dimensional map B F(C x~) paired with F.

    B is the first r rows of T^{-1} and C the first r columns of T; the
    result must agree with the first r conjugated components after setting
    the trailing variables to zero.
    """
    field = polymap.field
    n, r = polymap.n, reduction.r
    if reduction.conjugated.n != n:
        raise InconsistentReduction("reduction does not match the map's dimension")
    b_rows = Matrix(field, reduction.Tinv.rows[:r], ncols=n)
    c_cols = Matrix.from_columns(field, reduction.T.columns()[:r], nrows=n)
    into_line = PolyMap.linear(c_cols)  # K^r -> K^n
    image = polymap.compose(into_line)
    comps = []
    for i in range(r):
        acc = MPoly.zero(field, r)
        for j in range(n):
            if b_rows.rows[i][j]:
                acc = acc + image.components[j] * b_rows.rows[i][j]
        comps.append(acc)
    paired = PolyMap(field, r, comps)
    # the paired map must equal the leading conjugated components at
    # x_{r+1} = ... = x_n = 0
    zeros = [MPoly.zero(field, r)] * (n - r)
    images = list(MPoly.variables(field, r)) + zeros
    for i in range(r):
        expected = (
            reduction.conjugated.components[i].substitute(images)
            if n > 0
            else reduction.conjugated.components[i]
        )
        if expected != paired.components[i]:
            raise InconsistentReduction(
                f"paired component {i + 1} disagrees with the conjugated map"
            )
    return paired


def degree_bound_report(polymap: PolyMap) -> DegreeBoundReport:
    """Invert with the d^r bound, escalating to d^(n-1) only if it fails.

    Needing the escalation while the inverse degree exceeds d^r would refute
    the bound over characteristic zero, so that case raises TheoremViolation
    loudly; over a prime field the report is produced but flagged, since the
    bound is only asserted in characteristic zero.
    """
    higher = _require_normalized(polymap)
    field, n = polymap.field, polymap.n
    d = polymap.degree()
    kernel = constant_kernel(higher)
    r = n - kernel.ncols
    bound = d**r
    gabber = d ** (n - 1) if n > 0 else 1
    note = CHAR_P_NOTE if field.characteristic else None
    first = formal_inverse(polymap, max_deg=max(1, bound))
    if first.is_polynomial:
        actual = first.inverse_degree
        return DegreeBoundReport(
            n=n,
            d=d,
            r=r,
            bound=bound,
            gabber_bound=gabber,
            actual_inverse_degree=actual,
            satisfied=actual <= bound,
            escalated=False,
            char_p_note=note,
        )
    second = formal_inverse(polymap, max_deg=max(1, gabber))
    if not second.is_polynomial:
        raise NotInvertibleUpToBound(f"no polynomial inverse up to degree {max(1, gabber)}")
    actual = second.inverse_degree
    if field.characteristic == 0:
        raise TheoremViolation(
            f"inverse degree {actual} exceeds the d^r bound {bound} over a "
            "characteristic-zero field"
        )
    return DegreeBoundReport(
        n=n,
        d=d,
        r=r,
        bound=bound,
        gabber_bound=gabber,
        actual_inverse_degree=actual,
        satisfied=actual <= bound,
        escalated=True,
        char_p_note=note,
    )
