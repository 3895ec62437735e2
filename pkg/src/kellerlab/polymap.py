"""Polynomial maps K^n -> K^m: Jacobians, the Keller condition, Hadamard
powers and power-linear constructors, composition, homogeneous decomposition.
"""

from __future__ import annotations

from typing import Sequence

from .errors import ArityMismatch, FieldMismatch, NonSquare, NotHomogeneous
from .field_linalg import Field, Matrix
from .mpoly import MPoly, render


class PolyMap:
    """A sequence of polynomials in ``n`` shared variables, read as a map."""

    __slots__ = ("field", "n", "components")

    def __init__(self, field: Field, n: int, components: Sequence[MPoly]):
        comps = tuple(components)
        for c in comps:
            if not isinstance(c, MPoly):
                raise FieldMismatch("components must be polynomials")
            if c.field != field:
                raise FieldMismatch(f"component over {c.field} in a map over {field}")
            if c.nvars != n:
                raise ArityMismatch(f"component in {c.nvars} variables, map has {n}")
        self.field = field
        self.n = n
        self.components = comps

    @classmethod
    def identity(cls, field: Field, n: int) -> "PolyMap":
        return cls(field, n, MPoly.variables(field, n))

    @classmethod
    def linear(cls, matrix: Matrix) -> "PolyMap":
        """The linear map ``x -> Ax`` (rows become components)."""
        xs = MPoly.variables(matrix.field, matrix.ncols)
        comps = []
        for row in matrix.rows:
            acc = MPoly.zero(matrix.field, matrix.ncols)
            for a, x in zip(row, xs):
                if a:
                    acc = acc + x * a
            comps.append(acc)
        return cls(matrix.field, matrix.ncols, comps)

    @property
    def m(self) -> int:
        return len(self.components)

    def degree(self) -> int:
        """Max component degree; 0 for the empty or zero map by convention."""
        return max((c.degree() for c in self.components), default=0)

    def degree_support(self) -> tuple:
        """Sorted union of the term degrees over all components."""
        support = set()
        for c in self.components:
            support |= c.degrees()
        return tuple(sorted(support))

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.field == other.field and self.n == other.n and self.components == other.components

    def __hash__(self):
        return hash((self.field, self.n, self.components))

    def __repr__(self):
        return "(" + ", ".join(render(c) for c in self.components) + ")"

    def __add__(self, other: "PolyMap") -> "PolyMap":
        self._same_shape(other)
        return PolyMap(self.field, self.n, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "PolyMap") -> "PolyMap":
        self._same_shape(other)
        return PolyMap(self.field, self.n, [a - b for a, b in zip(self.components, other.components)])

    def _same_shape(self, other: "PolyMap"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if self.n != other.n or self.m != other.m:
            raise ArityMismatch("maps of different shapes")

    def evaluate(self, point: Sequence) -> tuple:
        if len(point) != self.n:
            raise ArityMismatch(f"point of length {len(point)} for a map on {self.n} variables")
        vals = [self.field.coerce(x) for x in point]
        return tuple(c.evaluate(vals) for c in self.components)

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """self after inner (``self.n`` must equal ``inner.m``)."""
        if self.field != inner.field:
            raise FieldMismatch(f"{self.field} vs {inner.field}")
        if self.n != inner.m:
            raise ArityMismatch(f"outer map takes {self.n} inputs, inner produces {inner.m}")
        if self.n == 0:
            comps = [MPoly.constant(self.field, inner.n, c.constant_term()) for c in self.components]
            return PolyMap(self.field, inner.n, comps)
        return PolyMap(
            self.field, inner.n, [c.substitute(inner.components) for c in self.components]
        )

    def translate(self, point: Sequence) -> "PolyMap":
        """The map ``x -> self(x + point)``."""
        vals = [self.field.coerce(x) for x in point]
        if len(vals) != self.n:
            raise ArityMismatch(f"point of length {len(vals)} for a map on {self.n} variables")
        xs = MPoly.variables(self.field, self.n)
        shift = PolyMap(self.field, self.n, [x + v for x, v in zip(xs, vals)])
        return self.compose(shift)

    def jacobian(self) -> "PolyMatrix":
        grid = [[c.derivative(j) for j in range(self.n)] for c in self.components]
        return PolyMatrix(self.field, self.n, grid)

    def det_jacobian(self) -> MPoly:
        if self.m != self.n:
            raise NonSquare(f"Jacobian determinant of a {self.m}x{self.n} map")
        return self.jacobian().det()

    def is_keller(self) -> bool:
        """True iff the Jacobian determinant is a nonzero constant."""
        det = self.det_jacobian()
        return (not det.is_zero()) and det.is_constant()

    def homogeneous_decomposition(self) -> dict:
        """Map degree -> homogeneous part (as a PolyMap); parts sum to self.

        Keys are exactly the occurring term degrees, ascending, so the key
        tuple doubles as the degree support (including 0 when constants
        occur).
        """
        degrees = self.degree_support()
        return {
            k: PolyMap(self.field, self.n, [c.homogeneous_component(k) for c in self.components])
            for k in degrees
        }

    def restrict(self, k: int) -> "PolyMap":
        """First ``k`` components as a map on the first ``k`` variables."""
        return PolyMap(self.field, k, [c.restrict_vars(k) for c in self.components[:k]])

    def embed(self, n: int) -> "PolyMap":
        """The same components viewed in a ring with ``n`` variables."""
        return PolyMap(self.field, n, [c.pad_vars(n) for c in self.components])


class PolyMatrix:
    """Dense matrix with polynomial entries (all in the same ring)."""

    __slots__ = ("field", "nvars", "nrows", "ncols", "grid")

    def __init__(self, field: Field, nvars: int, grid: Sequence[Sequence[MPoly]]):
        rows = tuple(tuple(row) for row in grid)
        width = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != width:
                raise ArityMismatch("ragged polynomial matrix")
            for e in row:
                if e.field != field or e.nvars != nvars:
                    raise FieldMismatch("entry from a different polynomial ring")
        self.field = field
        self.nvars = nvars
        self.nrows = len(rows)
        self.ncols = width
        self.grid = rows

    def entry(self, i: int, j: int) -> MPoly:
        return self.grid[i][j]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.grid == other.grid

    def __repr__(self):
        return "[" + "; ".join(", ".join(render(e) for e in row) for row in self.grid) + "]"

    def evaluate(self, point: Sequence) -> Matrix:
        vals = [self.field.coerce(x) for x in point]
        return Matrix(
            self.field,
            [[e.evaluate(vals) for e in row] for row in self.grid],
            ncols=self.ncols,
        )

    def substitute(self, images: Sequence[MPoly]) -> "PolyMatrix":
        nvars = images[0].nvars if images else self.nvars
        return PolyMatrix(
            self.field, nvars, [[e.substitute(images) for e in row] for row in self.grid]
        )

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ArityMismatch("polynomial matrix shapes do not match")
        zero = MPoly.zero(self.field, self.nvars)
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = zero
                for k in range(self.ncols):
                    acc = acc + self.grid[i][k] * other.grid[k][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.field, self.nvars, out)

    def matvec(self, vec: Sequence) -> tuple:
        """Apply to a vector of field scalars, yielding polynomials."""
        vals = [self.field.coerce(x) for x in vec]
        if len(vals) != self.ncols:
            raise ArityMismatch("vector length does not match column count")
        out = []
        for row in self.grid:
            acc = MPoly.zero(self.field, self.nvars)
            for e, v in zip(row, vals):
                acc = acc + e * v
            out.append(acc)
        return tuple(out)

    def det(self) -> MPoly:
        """Exact determinant over the polynomial ring.

        Cofactor expansion below 5x5; fraction-free Bareiss elimination above
        (its exact divisions are guaranteed by the Sylvester identity).
        """
        if self.nrows != self.ncols:
            raise NonSquare(f"determinant of a {self.nrows}x{self.ncols} polynomial matrix")
        n = self.nrows
        if n == 0:
            return MPoly.constant(self.field, self.nvars, 1)
        if n <= 4:
            return self._det_cofactor([list(r) for r in self.grid])
        return self._det_bareiss()

    def _det_cofactor(self, rows) -> MPoly:
        n = len(rows)
        if n == 1:
            return rows[0][0]
        acc = MPoly.zero(self.field, self.nvars)
        sign = 1
        for j in range(n):
            entry = rows[0][j]
            if not entry.is_zero():
                minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
                cofactor = entry * self._det_cofactor(minor)
                acc = acc + (cofactor if sign > 0 else -cofactor)
            sign = -sign
        return acc

    def _det_bareiss(self) -> MPoly:
        n = self.nrows
        a = [list(row) for row in self.grid]
        one = MPoly.constant(self.field, self.nvars, 1)
        prev = one
        sign = 1
        for k in range(n - 1):
            if a[k][k].is_zero():
                swap = next((r for r in range(k + 1, n) if not a[r][k].is_zero()), None)
                if swap is None:
                    return MPoly.zero(self.field, self.nvars)
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                    a[i][j] = num.exact_div(prev)
                a[i][k] = MPoly.zero(self.field, self.nvars)
            prev = a[k][k]
        result = a[n - 1][n - 1]
        return result if sign > 0 else -result


def hadamard_power(matrix: Matrix, d: int) -> PolyMap:
    """The map whose i-th component is the d-th power of the i-th row form."""
    if matrix.nrows != matrix.ncols:
        raise NonSquare(f"{matrix.nrows}x{matrix.ncols} coefficient matrix")
    if d < 1:
        raise ValueError("the Hadamard power exponent must be positive")
    linear = PolyMap.linear(matrix)
    return PolyMap(matrix.field, matrix.ncols, [c**d for c in linear.components])


def power_linear(matrix: Matrix, d: int) -> PolyMap:
    """The map ``x + (Ax)^{*d}`` with componentwise d-th powers."""
    return PolyMap.identity(matrix.field, matrix.ncols) + hadamard_power(matrix, d)


def euler_check(poly: MPoly, d: int) -> bool:
    """Literal Euler identity: sum_j x_j * d(poly)/dx_j equals d * poly.

    Requires the input to be homogeneous (a single term degree) or zero; over
    F_p the identity can hold degenerately when p divides d, which is why the
    check is the literal one.
    """
    if len(poly.degrees()) > 1:
        raise NotHomogeneous("polynomial has terms of several degrees")
    lhs = MPoly.zero(poly.field, poly.nvars)
    for j in range(poly.nvars):
        lhs = lhs + MPoly.variable(poly.field, poly.nvars, j) * poly.derivative(j)
    return lhs == poly * d
