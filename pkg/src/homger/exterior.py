"""Exterior algebra scaffolding: bitmask bases, Koszul signs, graded operators.

The basis of the k-th graded piece is the set of k-subsets of {0..n-1}
encoded as bitmasks listed in increasing numeric order.  The sign of a
basis wedge e_S ^ e_T is the parity of the merge permutation sorting the
concatenation (S ascending, T ascending).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .field import Field
from .linalg import Matrix, from_rows, mat_add, mat_mul, mat_sub, zeros


def popcount(x: int) -> int:
    return x.bit_count()


@lru_cache(maxsize=None)
def grade_masks(n: int, k: int) -> tuple[int, ...]:
    """All k-subsets of {0..n-1} as bitmasks in increasing numeric order."""
    if k < 0 or k > n:
        return ()
    return tuple(m for m in range(1 << n) if popcount(m) == k)


@lru_cache(maxsize=None)
def mask_position(n: int, k: int) -> dict:
    return {m: i for i, m in enumerate(grade_masks(n, k))}


def mask_bits(mask: int) -> list[int]:
    bits = []
    i = 0
    while mask >> i:
        if (mask >> i) & 1:
            bits.append(i)
        i += 1
    return bits


def merge_sign(a: int, b: int) -> int:
    """Koszul sign of e_a ^ e_b; zero when the index sets intersect."""
    if a & b:
        return 0
    inversions = 0
    for j in mask_bits(b):
        # bits of a strictly above j must jump over e_j
        inversions += popcount(a >> (j + 1))
    return -1 if inversions & 1 else 1


def single_out_sign(mask: int, bit: int) -> int:
    """Sign of moving e_bit to the front of the ascending wedge e_mask."""
    below = popcount(mask & ((1 << bit) - 1))
    return -1 if below & 1 else 1


@dataclass(frozen=True)
class Multivector:
    """Element of the exterior algebra over the base field, mixed grades allowed."""

    field: Field
    n: int
    comps: tuple  # sorted tuple of (mask, nonzero scalar)

    def coeff(self, mask: int):
        for m, c in self.comps:
            if m == mask:
                return c
        return self.field.zero()

    def is_zero(self) -> bool:
        return not self.comps

    def grades(self) -> set[int]:
        return {popcount(m) for m, _ in self.comps}

    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    def degree(self) -> int:
        gs = self.grades()
        if len(gs) != 1:
            raise ValueError("degree of a non-homogeneous multivector")
        return gs.pop()

    def grade_part(self, k: int) -> "Multivector":
        return Multivector(
            self.field, self.n, tuple((m, c) for m, c in self.comps if popcount(m) == k)
        )


def multivector(field: Field, n: int, comps: dict) -> Multivector:
    norm = []
    for mask, c in sorted(comps.items()):
        if isinstance(c, int):
            c = field.scalar(c)
        if not (0 <= mask < (1 << n)):
            raise ValueError("mask out of range")
        if c != 0:
            norm.append((mask, c))
    return Multivector(field, n, tuple(norm))


def mv_add(x: Multivector, y: Multivector) -> Multivector:
    acc = dict(x.comps)
    for m, c in y.comps:
        acc[m] = acc.get(m, x.field.zero()) + c
    return multivector(x.field, x.n, acc)


def mv_scale(c, x: Multivector) -> Multivector:
    if isinstance(c, int):
        c = x.field.scalar(c)
    return multivector(x.field, x.n, {m: c * v for m, v in x.comps})


def wedge(x: Multivector, y: Multivector) -> Multivector:
    if x.n != y.n:
        raise ValueError("wedge of multivectors over different spaces")
    acc: dict = {}
    for ma, ca in x.comps:
        for mb, cb in y.comps:
            s = merge_sign(ma, mb)
            if s == 0:
                continue
            m = ma | mb
            c = ca * cb if s == 1 else -(ca * cb)
            acc[m] = acc.get(m, x.field.zero()) + c
    return multivector(x.field, x.n, acc)


@dataclass(frozen=True)
class GradedOperator:
    """Degree-homogeneous linear map, one matrix per source grade.

    mats[k] maps grade k to grade k + degree; grades whose source or
    target is out of range carry a matrix with zero rows or columns.
    """

    degree: int
    dims: tuple[int, ...]  # field dimension of each grade of the carrier
    mats: tuple[Matrix, ...]

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def mat(self, k: int) -> Matrix:
        return self.mats[k]

    def target_dim(self, k: int) -> int:
        t = k + self.degree
        return self.dims[t] if 0 <= t <= self.top else 0

    def apply(self, k: int, vec: list) -> list:
        from .linalg import mat_vec

        return mat_vec(self.mats[k], vec)

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in m.entries) for m in self.mats)


def graded_operator(field: Field, degree: int, dims, mat_for) -> GradedOperator:
    """Assemble from a callback mat_for(k) -> Matrix | None (None = zero map)."""
    dims = tuple(dims)
    mats = []
    top = len(dims) - 1
    for k in range(top + 1):
        t = k + degree
        t_dim = dims[t] if 0 <= t <= top else 0
        m = mat_for(k)
        if m is None:
            m = zeros(field, t_dim, dims[k])
        if m.rows != t_dim or m.cols != dims[k]:
            raise ValueError(f"grade {k} matrix has shape {m.rows}x{m.cols}, expected {t_dim}x{dims[k]}")
        mats.append(m)
    return GradedOperator(degree, dims, tuple(mats))


def op_zero(field: Field, degree: int, dims) -> GradedOperator:
    return graded_operator(field, degree, dims, lambda k: None)


def op_identity(field: Field, dims) -> GradedOperator:
    from .linalg import identity

    return graded_operator(field, 0, dims, lambda k: identity(field, dims[k]))


def op_compose(g: GradedOperator, f: GradedOperator) -> GradedOperator:
    """g after f."""
    if g.dims != f.dims:
        raise ValueError("operators live on different carriers")
    field = f.mats[0].field
    deg = f.degree + g.degree
    top = len(f.dims) - 1

    def mat_for(k):
        t = k + f.degree
        if 0 <= t <= top:
            return mat_mul(g.mats[t], f.mats[k])
        return None

    return graded_operator(field, deg, f.dims, mat_for)


def op_add(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    if a.degree != b.degree or a.dims != b.dims:
        raise ValueError("operator shape mismatch")
    field = a.mats[0].field
    return graded_operator(field, a.degree, a.dims, lambda k: mat_add(a.mats[k], b.mats[k]))


def op_sub(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    if a.degree != b.degree or a.dims != b.dims:
        raise ValueError("operator shape mismatch")
    field = a.mats[0].field
    return graded_operator(field, a.degree, a.dims, lambda k: mat_sub(a.mats[k], b.mats[k]))


def op_scale(c, a: GradedOperator) -> GradedOperator:
    from .linalg import mat_scale

    field = a.mats[0].field
    return graded_operator(field, a.degree, a.dims, lambda k: mat_scale(c, a.mats[k]))


def op_square(a: GradedOperator) -> GradedOperator:
    return op_compose(a, a)


def op_invert(a: GradedOperator) -> GradedOperator:
    """Gradewise inverse of a degree-0 operator."""
    from .linalg import invert

    if a.degree != 0:
        raise ValueError("only degree-0 operators are invertible gradewise")
    field = a.mats[0].field

    def mat_for(k):
        inv = invert(a.mats[k])
        if inv is None:
            raise ValueError(f"grade {k} twist is singular")
        return inv

    return graded_operator(field, 0, a.dims, mat_for)
