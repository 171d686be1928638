"""Dense exact linear algebra over Q or F_p.

Rank uses fraction-free (Bareiss) elimination; kernels and solving use
exact Gauss-Jordan.  Both pivot on the first nonzero entry in column
order, so results are deterministic.  The two elimination routines act
as mutual cross-checks through the rank-nullity invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Optional

from .field import Field, RationalField


class Cancelled(RuntimeError):
    """Raised when a caller-supplied cancellation hook fires."""


CancelHook = Optional[Callable[[], bool]]


def _checkpoint(should_cancel: CancelHook):
    if should_cancel is not None and should_cancel():
        raise Cancelled("computation cancelled")


@dataclass(frozen=True)
class Matrix:
    field: Field
    rows: int
    cols: int
    entries: tuple  # row-major, length rows*cols

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    def at(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]


def from_rows(field: Field, rows) -> Matrix:
    rows = [list(r) for r in rows]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != n_cols:
            raise ValueError("ragged rows")
    flat = tuple(field.scalar(x) if isinstance(x, int) else x for r in rows for x in r)
    return Matrix(field, n_rows, n_cols, flat)


def zeros(field: Field, rows: int, cols: int) -> Matrix:
    z = field.zero()
    return Matrix(field, rows, cols, (z,) * (rows * cols))


def identity(field: Field, n: int) -> Matrix:
    z, o = field.zero(), field.one()
    ent = [z] * (n * n)
    for i in range(n):
        ent[i * n + i] = o
    return Matrix(field, n, n, tuple(ent))


def mat_vec(m: Matrix, v) -> list:
    if len(v) != m.cols:
        raise ValueError("dimension mismatch in mat_vec")
    out = []
    for i in range(m.rows):
        acc = m.field.zero()
        base = i * m.cols
        for j in range(m.cols):
            acc = acc + m.entries[base + j] * v[j]
        out.append(acc)
    return out


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise ValueError("dimension mismatch in mat_mul")
    z = a.field.zero()
    ent = []
    for i in range(a.rows):
        for j in range(b.cols):
            acc = z
            for k in range(a.cols):
                acc = acc + a.at(i, k) * b.at(k, j)
            ent.append(acc)
    return Matrix(a.field, a.rows, b.cols, tuple(ent))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError("shape mismatch")
    return Matrix(a.field, a.rows, a.cols, tuple(x + y for x, y in zip(a.entries, b.entries)))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError("shape mismatch")
    return Matrix(a.field, a.rows, a.cols, tuple(x - y for x, y in zip(a.entries, b.entries)))


def mat_scale(c, a: Matrix) -> Matrix:
    return Matrix(a.field, a.rows, a.cols, tuple(c * x for x in a.entries))


def transpose(m: Matrix) -> Matrix:
    ent = tuple(m.at(i, j) for j in range(m.cols) for i in range(m.rows))
    return Matrix(m.field, m.cols, m.rows, ent)


def is_zero_matrix(m: Matrix) -> bool:
    return all(x == 0 for x in m.entries)


def _prescale_rows(field: Field, work: list[list]) -> None:
    # Clears denominators row by row; row scaling preserves rank,
    # kernels and (with the augmented column included) solution sets.
    if not isinstance(field, RationalField):
        return
    for row in work:
        dens = [Fraction(x).denominator for x in row]
        m = lcm(*dens) if dens else 1
        if m != 1:
            for j in range(len(row)):
                row[j] = row[j] * m


def rank(m: Matrix, should_cancel: CancelHook = None) -> int:
    """Row rank by fraction-free (Bareiss) elimination."""
    work = m.to_rows()
    _prescale_rows(m.field, work)
    n_rows, n_cols = m.rows, m.cols
    one = m.field.one()
    prev = one
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        _checkpoint(should_cancel)
        pivot_row = None
        for i in range(r, n_rows):
            if work[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            work[r], work[pivot_row] = work[pivot_row], work[r]
        piv = work[r][c]
        for i in range(r + 1, n_rows):
            wi = work[i]
            wr = work[r]
            head = wi[c]
            for j in range(c, n_cols):
                wi[j] = (piv * wi[j] - head * wr[j]) / prev
        prev = piv
        r += 1
    return r


def _rref(field: Field, work: list[list], should_cancel: CancelHook = None) -> list[int]:
    """In-place reduced row echelon form; returns pivot column indices."""
    n_rows = len(work)
    n_cols = len(work[0]) if work else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        _checkpoint(should_cancel)
        pivot_row = None
        for i in range(r, n_rows):
            if work[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            work[r], work[pivot_row] = work[pivot_row], work[r]
        piv = work[r][c]
        work[r] = [x / piv for x in work[r]]
        for i in range(n_rows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return pivots


def kernel_basis(m: Matrix, should_cancel: CancelHook = None) -> list[list]:
    """Basis of the right null space, one vector per free column."""
    work = m.to_rows()
    pivots = _rref(m.field, work, should_cancel)
    pivot_set = set(pivots)
    zero, one = m.field.zero(), m.field.one()
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [zero] * m.cols
        v[free] = one
        for r, pc in enumerate(pivots):
            v[pc] = -work[r][free]
        basis.append(v)
    return basis


def solve(m: Matrix, b, should_cancel: CancelHook = None) -> Optional[list]:
    """Some x with m*x = b, or None when the system is inconsistent."""
    if len(b) != m.rows:
        raise ValueError("dimension mismatch in solve")
    work = [m.row(i) + [b[i]] for i in range(m.rows)]
    pivots = _rref(m.field, work, should_cancel)
    if m.cols in pivots:
        return None
    zero = m.field.zero()
    x = [zero] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = work[r][m.cols]
    return x


def invert(m: Matrix) -> Optional[Matrix]:
    """Inverse matrix, or None when singular."""
    if m.rows != m.cols:
        return None
    n = m.rows
    ident = identity(m.field, n)
    work = [m.row(i) + ident.row(i) for i in range(n)]
    pivots = _rref(m.field, work)
    if pivots[:n] != list(range(n)):
        return None
    ent = tuple(work[i][n + j] for i in range(n) for j in range(n))
    return Matrix(m.field, n, n, ent)


def mat_pow(m: Matrix, k: int) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("powers need a square matrix")
    if k < 0:
        inv = invert(m)
        if inv is None:
            raise ValueError("negative power of a singular matrix")
        return mat_pow(inv, -k)
    acc = identity(m.field, m.rows)
    for _ in range(k):
        acc = mat_mul(acc, m)
    return acc
