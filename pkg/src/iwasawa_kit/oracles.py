"""Brute-force enumeration oracles.

Everything here is deliberately independent of the Howell/minor machinery:
spans are closed by exhaustive addition, annihilation is checked element by
element. Used by the test suite and the selftest campaigns to cross-check the
fast paths on small instances.
"""

from __future__ import annotations

import itertools

from .fitting import FiniteCommAlgebra, FinPresModule, IdealHandle
from .linalg import ZModPN


def enumerate_span(rows: list[list[int]], width: int, R: ZModPN) -> set[tuple[int, ...]]:
    """All Z/p^N-combinations of the rows, by exhaustive closure."""
    q = R.q
    out = {(0,) * width}
    for r in rows:
        r = tuple(c % q for c in r)
        out = {
            tuple((a + k * b) % q for a, b in zip(x, r)) for x in out for k in range(q)
        }
    return out


def enumerate_ideal(algebra: FiniteCommAlgebra, generators) -> set[tuple[int, ...]]:
    """All elements of the ideal (generators), by exhaustive closure of the
    Z/p^N-span of {g * basis_j}."""
    rows = []
    for g in generators:
        for j in range(algebra.dim):
            rows.append(list(algebra.mul(tuple(g), algebra.basis_element(j))))
    return enumerate_span(rows, algebra.dim, algebra.R)


def ideal_equal_oracle(I: IdealHandle, J: IdealHandle) -> bool:
    return enumerate_ideal(I.algebra, I.generators) == enumerate_ideal(J.algebra, J.generators)


def ideal_member_oracle(x, I: IdealHandle) -> bool:
    return tuple(c % I.algebra.q for c in x) in enumerate_ideal(I.algebra, I.generators)


def module_elements(orders: tuple[int, ...]):
    return itertools.product(*(range(d) for d in orders))


def annihilation_oracle(matrix: list[list[int]], orders: tuple[int, ...]) -> bool:
    """Does the integer matrix kill every element of sum_i Z/orders[i]?"""
    k = len(orders)
    for x in module_elements(orders):
        for i in range(k):
            if sum(matrix[i][j] * x[j] for j in range(k)) % orders[i]:
                return False
    return True


def module_size(M: FinPresModule) -> int:
    """|M| by exhaustive span enumeration of the relation realization."""
    rows = []
    for row in M.relations:
        for i in range(M.algebra.dim):
            rows.append(M._vec_to_flat(M.scale_row(M.algebra.basis_element(i), row)))
    span = enumerate_span(rows, M.rwidth, M.algebra.R)
    return M.algebra.q**M.rwidth // len(span)
