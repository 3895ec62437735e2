"""Shared test helpers: parse shortcuts, seeded random generators, and
independent oracles (permutation-expansion determinants, brute-force rank)
used to cross-check the elimination-based implementations."""

import itertools
import random

from kellerlab import Matrix, MPoly, PolyMap, parse


def P(text, nvars, field):
    return parse(text, nvars, field)


def pmap(field, nvars, *texts):
    return PolyMap(field, nvars, [parse(t, nvars, field) for t in texts])


def perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def perm_det(matrix):
    """Permutation-expansion determinant; independent of elimination."""
    n = matrix.nrows
    field = matrix.field
    total = field.zero
    for perm in itertools.permutations(range(n)):
        prod = field.one
        for i, j in enumerate(perm):
            prod = prod * matrix.rows[i][j]
        total = total + (prod if perm_sign(perm) > 0 else -prod)
    return total


def brute_rank(matrix):
    """Largest size of a square submatrix with nonzero permutation det."""
    best = 0
    field = matrix.field
    for k in range(1, min(matrix.nrows, matrix.ncols) + 1):
        for rows in itertools.combinations(range(matrix.nrows), k):
            for cols in itertools.combinations(range(matrix.ncols), k):
                sub = Matrix(field, [[matrix.rows[i][j] for j in cols] for i in rows])
                if perm_det(sub) != field.zero:
                    best = k
                    break
            if best == k:
                break
    return best


def random_scalar(rng, field, span=5):
    return field.coerce(rng.randint(-span, span))


def random_matrix(rng, field, nrows, ncols, span=5):
    return Matrix(
        field,
        [[random_scalar(rng, field, span) for _ in range(ncols)] for _ in range(nrows)],
        ncols=ncols,
    )


def random_mpoly(rng, field, nvars, max_deg=3, max_terms=4, span=5):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exps = [0] * nvars
        budget = rng.randint(0, max_deg)
        for _ in range(budget):
            exps[rng.randrange(nvars)] += 1
        terms[tuple(exps)] = rng.randint(-span, span)
    return MPoly(field, nvars, terms)


def rng_for(name):
    return random.Random(f"kellerlab:{name}")
