"""Small exact linear algebra over any field-like scalar (ScalarQ or Fraction).

Matrices are lists of lists.  Scalars must support +, -, *, /, equality with
the supplied zero/one elements.  Pivoting is always "first nonzero column,
first usable row", which keeps every reduction deterministic; callers encode
their preferred pivot preference by ordering rows/columns beforehand.
"""

from __future__ import annotations

from typing import Callable, Sequence, TypeVar

S = TypeVar("S")


def rref(rows: Sequence[Sequence[S]], zero: S, one: S) -> tuple[list[list[S]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if m[i][c] != zero:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = one / m[r][c]
        m[r] = [inv * x for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != zero:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[S]], zero: S, one: S) -> int:
    _, pivots = rref(rows, zero, one)
    return len(pivots)


def nullspace(rows: Sequence[Sequence[S]], zero: S, one: S) -> list[list[S]]:
    """Basis of the right kernel; one vector per free column, the free
    coordinate set to one and later free coordinates to zero."""
    if not rows:
        return []
    red, pivots = rref(rows, zero, one)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = zero - red[r][fc]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence[S]], rhs: Sequence[S], zero: S, one: S) -> list[S] | None:
    """One solution of A x = b with free coordinates set to zero, or None."""
    if not rows:
        return None
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, zero, one)
    ncols = len(rows[0])
    if ncols in pivots:
        return None  # pivot in the rhs column: inconsistent
    x = [zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def invert(rows: Sequence[Sequence[S]], zero: S, one: S) -> list[list[S]]:
    n = len(rows)
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = rref(aug, zero, one)
    if pivots != list(range(n)):
        raise ArithmeticError("matrix is singular")
    return [row[n:] for row in red]


def mat_mul(a: Sequence[Sequence[S]], b: Sequence[Sequence[S]], zero: S) -> list[list[S]]:
    out = []
    for row in a:
        orow = []
        for j in range(len(b[0])):
            acc = zero
            for k, x in enumerate(row):
                if x != zero and b[k][j] != zero:
                    acc = acc + x * b[k][j]
            orow.append(acc)
        out.append(orow)
    return out


def mat_eq(a: Sequence[Sequence[S]], b: Sequence[Sequence[S]]) -> bool:
    return len(a) == len(b) and all(ra == rb for ra, rb in zip(a, b))
