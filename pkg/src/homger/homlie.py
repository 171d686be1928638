"""Hom-Lie algebras over the base field and their representations.

A structure is a skew bracket table g[i][j] (coefficient vectors), a
twist matrix alpha that is multiplicative for the bracket, and the
twisted Jacobi identity
[alpha(x),[y,z]] + [alpha(y),[z,x]] + [alpha(z),[x,y]] = 0
checked exhaustively on basis triples.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .field import Field
from .linalg import Matrix, from_rows, invert, mat_mul, mat_pow, mat_sub, mat_vec
from .reports import Report


@dataclass(frozen=True)
class HomLieAlgebra:
    field: Field
    dim: int
    bracket_table: tuple  # bracket_table[i][j] = coefficient tuple, full table
    alpha: Matrix

    @cached_property
    def alpha_inverse(self) -> Matrix | None:
        return invert(self.alpha)

    @property
    def is_regular(self) -> bool:
        return self.alpha_inverse is not None

    def zero(self) -> tuple:
        return (self.field.zero(),) * self.dim

    def basis(self, i: int) -> tuple:
        return tuple(
            self.field.one() if j == i else self.field.zero() for j in range(self.dim)
        )

    def bracket(self, x, y) -> tuple:
        out = [self.field.zero()] * self.dim
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                c = xi * yj
                tij = self.bracket_table[i][j]
                for k in range(self.dim):
                    if tij[k] != 0:
                        out[k] = out[k] + c * tij[k]
        return tuple(out)

    def alpha_apply(self, x) -> tuple:
        return tuple(mat_vec(self.alpha, list(x)))

    def fmt(self, x) -> str:
        return "(" + ", ".join(self.field.fmt(c) for c in x) + ")"


def hom_lie_algebra(field: Field, dim: int, half_table: dict, alpha_rows) -> HomLieAlgebra:
    """Build from the strict upper half {(i, j): vector} with 0-based i < j."""
    zero_vec = (field.zero(),) * dim
    table = [[zero_vec] * dim for _ in range(dim)]
    for (i, j), vec in half_table.items():
        if not (0 <= i < j < dim):
            raise ValueError(f"bracket key ({i},{j}) out of range or not ordered")
        v = tuple(field.scalar(c) if isinstance(c, int) else c for c in vec)
        table[i][j] = v
        table[j][i] = tuple(-c for c in v)
    return HomLieAlgebra(
        field, dim, tuple(tuple(r) for r in table), from_rows(field, alpha_rows)
    )


def check_hom_lie(g: HomLieAlgebra, name: str = "hom-lie") -> Report:
    report = Report(name)
    n = g.dim

    for i in range(n):
        for j in range(n):
            lhs = g.bracket_table[i][j]
            rhs = tuple(-c for c in g.bracket_table[j][i])
            if lhs != rhs or (i == j and any(c != 0 for c in lhs)):
                report.record_failure_once(
                    "lie.skew",
                    {"pair": f"(x{i + 1}, x{j + 1})", "lhs": g.fmt(lhs), "rhs": g.fmt(rhs)},
                )
    report.mark_pass_if_unreported("lie.skew")

    for i in range(n):
        for j in range(n):
            lhs = g.alpha_apply(g.bracket_table[i][j])
            rhs = g.bracket(g.alpha_apply(g.basis(i)), g.alpha_apply(g.basis(j)))
            if lhs != rhs:
                report.record_failure_once(
                    "lie.twist_morphism",
                    {"pair": f"(x{i + 1}, x{j + 1})", "lhs": g.fmt(lhs), "rhs": g.fmt(rhs)},
                )
    report.mark_pass_if_unreported("lie.twist_morphism")

    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                x, y, z = g.basis(i), g.basis(j), g.basis(k)
                acc = g.bracket(g.alpha_apply(x), g.bracket(y, z))
                acc = tuple(
                    a + b for a, b in zip(acc, g.bracket(g.alpha_apply(y), g.bracket(z, x)))
                )
                acc = tuple(
                    a + b for a, b in zip(acc, g.bracket(g.alpha_apply(z), g.bracket(x, y)))
                )
                if any(c != 0 for c in acc):
                    report.record_failure_once(
                        "lie.hom_jacobi",
                        {"triple": f"(x{i + 1}, x{j + 1}, x{k + 1})", "cyclic_sum": g.fmt(acc)},
                    )
    report.mark_pass_if_unreported("lie.hom_jacobi")
    return report


@dataclass(frozen=True)
class HomLieRep:
    """Representation (rho, alpha_V) of a hom-Lie algebra on a vector space."""

    dim: int
    rho: tuple  # one dim-by-dim Matrix per basis element of g
    alpha_v: Matrix

    def rho_of(self, g: HomLieAlgebra, x) -> Matrix:
        acc = None
        for i, xi in enumerate(x):
            term = None if xi == 0 else mat_scale_cached(xi, self.rho[i])
            if term is None:
                continue
            acc = term if acc is None else madd(acc, term)
        if acc is None:
            from .linalg import zeros

            return zeros(self.rho[0].field, self.dim, self.dim)
        return acc


def mat_scale_cached(c, m: Matrix) -> Matrix:
    from .linalg import mat_scale

    return mat_scale(c, m)


def madd(a: Matrix, b: Matrix) -> Matrix:
    from .linalg import mat_add

    return mat_add(a, b)


def check_hom_lie_rep(g: HomLieAlgebra, rep: HomLieRep, name: str = "hom-lie-rep") -> Report:
    """Both identities of a twisted representation, on all basis pairs."""
    report = Report(name)
    n = g.dim

    for i in range(n):
        lhs = mat_mul(rep.rho_of(g, g.alpha_apply(g.basis(i))), rep.alpha_v)
        rhs = mat_mul(rep.alpha_v, rep.rho[i])
        if lhs != rhs:
            report.record_failure_once(
                "rep.twist_compat", {"basis": f"x{i + 1}", "lhs": str(lhs.entries), "rhs": str(rhs.entries)}
            )
    report.mark_pass_if_unreported("rep.twist_compat")

    for i in range(n):
        for j in range(n):
            lhs = mat_mul(rep.rho_of(g, g.bracket_table[i][j]), rep.alpha_v)
            ri = rep.rho_of(g, g.alpha_apply(g.basis(i)))
            rj = rep.rho_of(g, g.alpha_apply(g.basis(j)))
            rhs = mat_sub(mat_mul(ri, rep.rho[j]), mat_mul(rj, rep.rho[i]))
            if lhs != rhs:
                report.record_failure_once(
                    "rep.bracket_compat",
                    {"pair": f"(x{i + 1}, x{j + 1})", "lhs": str(lhs.entries), "rhs": str(rhs.entries)},
                )
    report.mark_pass_if_unreported("rep.bracket_compat")
    return report


def adjoint_rep(g: HomLieAlgebra, s: int) -> HomLieRep:
    """ad_s(x) = [alpha^s(x), -] with value twist alpha (regular g for s < 0)."""
    if s < 0 and not g.is_regular:
        raise ValueError("negative twist powers need an invertible alpha")
    a_s = mat_pow(g.alpha, s)
    mats = []
    for i in range(g.dim):
        xi = tuple(mat_vec(a_s, list(g.basis(i))))
        cols = [g.bracket(xi, g.basis(j)) for j in range(g.dim)]
        rows = [[cols[j][k] for j in range(g.dim)] for k in range(g.dim)]
        mats.append(from_rows(g.field, rows))
    return HomLieRep(g.dim, tuple(mats), g.alpha)
