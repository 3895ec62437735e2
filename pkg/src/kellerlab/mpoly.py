"""Sparse multivariate polynomials over an exact field, dense univariate
restrictions, and the expression grammar (parser + canonical renderer).

Canonical form: term maps carry no zero coefficients and iterate in
graded-lexicographic order (total degree first, then exponent tuple),
descending.  Two polynomials are equal iff their canonical term maps are
equal, so ``==`` is exact polynomial identity.

Grammar accepted by :func:`parse` (whitespace insignificant, no implicit
multiplication):

    expr     := term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := base ("^" nonneg-int)?
    base     := rational | var | "(" expr ")" | "-" base
    rational := int ("/" posint)?
    var      := "x" posint            # x1 is the first variable

Note the grammar binds unary minus tighter than "^": ``-x1^2`` is
``(-x1)^2``.  The renderer never emits that shape, so parse(render(p)) == p.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import (
    ArityMismatch,
    BadIndex,
    BadVariable,
    DivisorNotUnit,
    FieldMismatch,
    ParseError,
)
from .field_linalg import Field, Rationals


def _grlex(exps):
    return (sum(exps), exps)


class MPoly:
    """Sparse polynomial in ``nvars`` variables over an exact field."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms=()):
        items = terms.items() if isinstance(terms, dict) else terms
        acc = {}
        for exps, c in items:
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ArityMismatch(f"monomial {exps} in a {nvars}-variable ring")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = field.coerce(c)
            if exps in acc:
                c = acc[exps] + c
            acc[exps] = c
        cleaned = {e: c for e, c in acc.items() if c}
        self.field = field
        self.nvars = nvars
        self.terms = {e: cleaned[e] for e in sorted(cleaned, key=_grlex, reverse=True)}

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, field: Field, nvars: int) -> "MPoly":
        return cls(field, nvars)

    @classmethod
    def constant(cls, field: Field, nvars: int, value) -> "MPoly":
        return cls(field, nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, field: Field, nvars: int, index: int) -> "MPoly":
        if not 0 <= index < nvars:
            raise BadIndex(f"variable index {index} outside 0..{nvars - 1}")
        exps = tuple(1 if j == index else 0 for j in range(nvars))
        return cls(field, nvars, {exps: 1})

    @classmethod
    def variables(cls, field: Field, nvars: int) -> tuple:
        return tuple(cls.variable(field, nvars, j) for j in range(nvars))

    # ---- ring structure -----------------------------------------------

    def _compat(self, other: "MPoly"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if self.nvars != other.nvars:
            raise ArityMismatch(f"{self.nvars} vs {other.nvars} variables")

    def _as_poly(self, x):
        if isinstance(x, MPoly):
            return x
        return MPoly.constant(self.field, self.nvars, x)

    def __add__(self, other):
        other = self._as_poly(other)
        self._compat(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            prev = acc.get(e)
            acc[e] = c if prev is None else prev + c
        return MPoly(self.field, self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._as_poly(other))

    def __rsub__(self, other):
        return self._as_poly(other) - self

    def _mul(self, other: "MPoly", max_degree) -> "MPoly":
        self._compat(other)
        # ascending-degree view of the right factor so truncation can break early
        rhs = [(sum(e), e, c) for e, c in reversed(list(other.terms.items()))]
        acc = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for d2, e2, c2 in rhs:
                if max_degree is not None and d1 + d2 > max_degree:
                    break
                key = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                prev = acc.get(key)
                acc[key] = prod if prev is None else prev + prod
        return MPoly(self.field, self.nvars, acc)

    def __mul__(self, other):
        return self._mul(self._as_poly(other), None)

    __rmul__ = __mul__

    def _pow(self, e: int, max_degree) -> "MPoly":
        if e < 0:
            raise ValueError("negative polynomial power")
        result = MPoly.constant(self.field, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result._mul(base, max_degree)
            e >>= 1
            if e:
                base = base._mul(base, max_degree)
        return result

    def __pow__(self, e: int):
        return self._pow(e, None)

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, self.nvars, tuple(self.terms.items())))

    def __repr__(self):
        return render(self)

    # ---- structure queries ---------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.field.zero)

    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial by convention."""
        if not self.terms:
            return 0
        return sum(next(iter(self.terms)))

    def degrees(self) -> set:
        """Set of total degrees of the terms (the degree support)."""
        return {sum(e) for e in self.terms}

    def leading_term(self):
        e = next(iter(self.terms))
        return e, self.terms[e]

    # ---- calculus and substitution ---------------------------------------

    def derivative(self, index: int) -> "MPoly":
        """Formal partial derivative in the given variable (0-based).

        Coefficients are multiplied in the field, so over F_p the derivative
        of ``x^p`` is zero.
        """
        if not 0 <= index < self.nvars:
            raise BadIndex(f"variable index {index} outside 0..{self.nvars - 1}")
        acc = {}
        for e, c in self.terms.items():
            k = e[index]
            if k == 0:
                continue
            new = list(e)
            new[index] = k - 1
            acc[tuple(new)] = c * k
        return MPoly(self.field, self.nvars, acc)

    def substitute(self, images: Sequence["MPoly"], max_degree=None) -> "MPoly":
        """Compose with the given images, one per variable.

        All images must share a variable count and the field.  Powers of each
        image are memoized (square-and-multiply) because composition is the
        hot path of series inversion; ``max_degree`` truncates every product
        by total degree, which is sound since degrees only add.
        """
        if len(images) != self.nvars:
            raise ArityMismatch(f"{len(images)} images for {self.nvars} variables")
        if self.nvars == 0:
            raise ArityMismatch("cannot substitute into a 0-variable polynomial")
        tgt = images[0]
        for im in images:
            if not isinstance(im, MPoly):
                raise FieldMismatch("images must be polynomials")
            tgt._compat(im)
        if self.field != tgt.field:
            raise FieldMismatch(f"{self.field} vs {tgt.field}")
        caches = [{0: MPoly.constant(tgt.field, tgt.nvars, 1), 1: im} for im in images]

        def power(j, e):
            cache = caches[j]
            if e not in cache:
                half = power(j, e // 2)
                sq = half._mul(half, max_degree)
                cache[e] = sq._mul(images[j], max_degree) if e & 1 else sq
            return cache[e]

        acc = MPoly.zero(tgt.field, tgt.nvars)
        for exps, c in self.terms.items():
            term = MPoly.constant(tgt.field, tgt.nvars, c)
            for j, e in enumerate(exps):
                if e:
                    term = term._mul(power(j, e), max_degree)
            acc = acc + term
        return acc

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise ArityMismatch(f"point of length {len(point)} in {self.nvars} variables")
        vals = [self.field.coerce(x) for x in point]
        acc = self.field.zero
        for exps, c in self.terms.items():
            prod = c
            for j, e in enumerate(exps):
                if e:
                    prod = prod * vals[j] ** e
            acc = acc + prod
        return acc

    def homogeneous_component(self, k: int) -> "MPoly":
        return MPoly(self.field, self.nvars, {e: c for e, c in self.terms.items() if sum(e) == k})

    def homogeneous_components(self) -> dict:
        """Map degree -> homogeneous part, ascending keys; parts sum to self."""
        out = {}
        for e, c in self.terms.items():
            out.setdefault(sum(e), {})[e] = c
        return {k: MPoly(self.field, self.nvars, out[k]) for k in sorted(out)}

    def restrict_to_line(self, direction: Sequence) -> "UniPoly":
        """The univariate polynomial ``t -> self(t * direction)``."""
        if len(direction) != self.nvars:
            raise ArityMismatch(f"direction of length {len(direction)} in {self.nvars} variables")
        b = [self.field.coerce(x) for x in direction]
        coeffs = [self.field.zero] * (self.degree() + 1)
        for exps, c in self.terms.items():
            prod = c
            for j, e in enumerate(exps):
                if e:
                    prod = prod * b[j] ** e
            coeffs[sum(exps)] = coeffs[sum(exps)] + prod
        return UniPoly(self.field, coeffs)

    # ---- variable plumbing -----------------------------------------------

    def pad_vars(self, nvars: int) -> "MPoly":
        """Embed into a ring with more variables (appended, unused)."""
        if nvars < self.nvars:
            raise ArityMismatch(f"cannot pad {self.nvars} variables down to {nvars}")
        extra = (0,) * (nvars - self.nvars)
        return MPoly(self.field, nvars, {e + extra: c for e, c in self.terms.items()})

    def restrict_vars(self, nvars: int) -> "MPoly":
        """Drop trailing variables; they must not occur in any term."""
        if nvars > self.nvars:
            raise ArityMismatch(f"cannot restrict {self.nvars} variables up to {nvars}")
        for e in self.terms:
            if any(e[nvars:]):
                raise ArityMismatch("polynomial depends on a dropped variable")
        return MPoly(self.field, nvars, {e[:nvars]: c for e, c in self.terms.items()})

    def exact_div(self, divisor: "MPoly") -> "MPoly":
        """Exact quotient ``self / divisor``; raises ValueError when inexact.

        Graded-lex leading-term division: over a field the leading term of a
        product is the product of leading terms, so when the division is
        exact this loop terminates with remainder zero.
        """
        self._compat(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        d_exps, d_coeff = divisor.leading_term()
        rem = dict(self.terms)
        quot = {}
        while rem:
            r_exps = max(rem, key=_grlex)
            diff = tuple(a - b for a, b in zip(r_exps, d_exps))
            if any(d < 0 for d in diff):
                raise ValueError("division is not exact")
            qc = rem[r_exps] / d_coeff
            quot[diff] = qc
            for e, c in divisor.terms.items():
                key = tuple(a + b for a, b in zip(diff, e))
                prev = rem.get(key, self.field.zero)
                new = prev - qc * c
                if new:
                    rem[key] = new
                elif key in rem:
                    del rem[key]
        return MPoly(self.field, self.nvars, quot)


class UniPoly:
    """Dense univariate polynomial; coefficient ``k`` multiplies ``t^k``."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Sequence):
        cs = [field.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, field: Field) -> "UniPoly":
        return cls(field, ())

    @classmethod
    def constant(cls, field: Field, value) -> "UniPoly":
        return cls(field, (value,))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; 0 for the zero polynomial by convention."""
        return max(len(self.coeffs) - 1, 0)

    def support(self) -> tuple:
        return tuple(k for k, c in enumerate(self.coeffs) if c)

    def coefficient(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.field.zero

    def evaluate(self, t):
        t = self.field.coerce(t)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(self.field, [c * k for k, c in enumerate(self.coeffs)][1:])

    def __add__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(self.field, other)
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.field, [self.coefficient(k) + other.coefficient(k) for k in range(n)])

    def __neg__(self):
        return UniPoly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(self.field, other)
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def render(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            parts.append(_format_term(self.field, c, mono, first=not parts))
        return "".join(parts)

    def __repr__(self):
        return self.render()


def rational_roots(poly: UniPoly) -> list:
    """All rational roots of a nonzero polynomial over Q, canonically sorted.

    Classic rational-root test after clearing denominators; the canonical
    order is by (|numerator|, denominator, sign), so 0 < -1 < 1 < -1/2 < ...
    """
    if not isinstance(poly.field, Rationals):
        raise FieldMismatch("rational root search needs a polynomial over Q")
    if poly.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    roots = set()
    coeffs = list(poly.coeffs)
    shift = 0
    while not coeffs[0]:
        coeffs.pop(0)
        shift += 1
    if shift:
        roots.add(Fraction(0))
    if len(coeffs) > 1:
        scale = 1
        for c in coeffs:
            scale = scale * c.denominator // _gcd(scale, c.denominator)
        ints = [int(c * scale) for c in coeffs]
        for p in _divisors(abs(ints[0])):
            for q in _divisors(abs(ints[-1])):
                if _gcd(p, q) != 1:
                    continue
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if poly.evaluate(cand) == 0:
                        roots.add(cand)
    qq = poly.field
    return sorted(roots, key=qq.sort_key)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _divisors(n: int) -> list:
    divs = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            divs.append(d)
            if d != n // d:
                divs.append(n // d)
        d += 1
    return sorted(divs)


# ---- text grammar -------------------------------------------------------


class _Parser:
    def __init__(self, text: str, nvars: int, field: Field):
        self.text = text
        self.end = len(text)
        self.nvars = nvars
        self.field = field
        self.pos = 0

    def fail(self, message: str, pos=None):
        raise ParseError(message, offset=(self.pos if pos is None else pos) + 1)

    def skip_ws(self):
        while self.pos < self.end and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < self.end else ""

    def digits(self) -> int:
        start = self.pos
        while self.pos < self.end and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected digits")
        return int(self.text[start : self.pos])

    def expr(self) -> MPoly:
        node = self.term()
        while True:
            c = self.peek()
            if c == "+":
                self.pos += 1
                node = node + self.term()
            elif c == "-":
                self.pos += 1
                node = node - self.term()
            else:
                return node

    def term(self) -> MPoly:
        node = self.factor()
        while self.peek() == "*":
            self.pos += 1
            node = node * self.factor()
        return node

    def factor(self) -> MPoly:
        node = self.base()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            return node ** self.digits()
        return node

    def base(self) -> MPoly:
        c = self.peek()
        if c == "-":
            self.pos += 1
            return -self.base()
        if c == "(":
            self.pos += 1
            node = self.expr()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.pos += 1
            return node
        if c == "x":
            mark = self.pos
            self.pos += 1
            if self.pos >= self.end or not self.text[self.pos].isdigit():
                self.fail("expected a variable index after 'x'")
            index = self.digits()
            if index == 0:
                self.fail("variable index must be at least 1", mark)
            if index > self.nvars:
                raise BadVariable(
                    f"x{index} exceeds the declared {self.nvars} variables", offset=mark + 1
                )
            return MPoly.variable(self.field, self.nvars, index - 1)
        if c.isdigit():
            num = self.digits()
            den = 1
            if self.peek() == "/":
                self.pos += 1
                self.skip_ws()
                mark = self.pos
                den = self.digits()
                if den == 0:
                    self.fail("denominator must be positive", mark)
                try:
                    value = self.field.from_literal(num, den)
                except DivisorNotUnit as exc:
                    raise DivisorNotUnit(str(exc), offset=mark + 1) from None
                return MPoly.constant(self.field, self.nvars, value)
            return MPoly.constant(self.field, self.nvars, self.field.from_literal(num, 1))
        self.fail("expected a number, variable, '(' or '-'")


def parse(text: str, nvars: int, field: Field) -> MPoly:
    """Parse an expression into canonical form (see the module grammar)."""
    parser = _Parser(text, nvars, field)
    poly = parser.expr()
    parser.skip_ws()
    if parser.pos != parser.end:
        parser.fail("unexpected trailing input")
    return poly


def _format_term(field: Field, coeff, mono: str, first: bool) -> str:
    if field.characteristic == 0 and coeff < 0:
        sign, mag = "-", -coeff
    else:
        sign, mag = "+", coeff
    if not mono:
        body = field.render(mag)
    elif mag == field.one:
        body = mono
    else:
        body = f"{field.render(mag)}*{mono}"
    if first:
        if sign == "-":
            # a bare leading "-x1^2" would parse as (-x1)^2; fold the sign
            # into an explicit numeric coefficient instead
            if mono and mag == field.one:
                return f"-1*{mono}"
            return f"-{body}"
        return body
    return f" {sign} {body}"


def render(poly: MPoly) -> str:
    """Canonical text form; graded-lex descending, round-trips through parse."""
    if poly.is_zero():
        return "0"
    parts = []
    for exps, c in poly.terms.items():
        mono = "*".join(
            f"x{j + 1}" if e == 1 else f"x{j + 1}^{e}" for j, e in enumerate(exps) if e
        )
        parts.append(_format_term(poly.field, c, mono, first=not parts))
    return "".join(parts)
