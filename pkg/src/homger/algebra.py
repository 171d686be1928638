"""Finite-dimensional commutative unital algebras with twist maps.

The algebra A is given by structure constants on a fixed basis
b_1..b_m; elements are coefficient tuples.  A twist is an algebra
endomorphism phi stored as an m-by-m matrix acting on coefficient
vectors.  phi-derivations delta satisfy
delta(a*b) = phi(a)*delta(b) + phi(b)*delta(a).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .field import Field
from .linalg import Matrix, from_rows, invert, kernel_basis, mat_vec
from .reports import Report

AElem = tuple  # coefficient tuple of length algebra.dim


@dataclass(frozen=True)
class CommAlgebra:
    field: Field
    dim: int
    mul_table: tuple  # mul_table[i][j] = coefficient tuple of b_i * b_j
    unit: AElem

    def zero(self) -> AElem:
        return (self.field.zero(),) * self.dim

    def one(self) -> AElem:
        return self.unit

    def basis(self, i: int) -> AElem:
        return tuple(
            self.field.one() if j == i else self.field.zero() for j in range(self.dim)
        )

    def add(self, a: AElem, b: AElem) -> AElem:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: AElem, b: AElem) -> AElem:
        return tuple(x - y for x, y in zip(a, b))

    def smul(self, c, a: AElem) -> AElem:
        return tuple(c * x for x in a)

    def mul(self, a: AElem, b: AElem) -> AElem:
        out = [self.field.zero()] * self.dim
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj == 0:
                    continue
                c = ai * bj
                tij = self.mul_table[i][j]
                for k in range(self.dim):
                    if tij[k] != 0:
                        out[k] = out[k] + c * tij[k]
        return tuple(out)

    def from_int(self, n: int) -> AElem:
        return self.smul(self.field.scalar(n), self.unit)

    def mul_operator(self, a: AElem) -> Matrix:
        """Matrix of x -> a*x on the chosen basis."""
        cols = [self.mul(a, self.basis(j)) for j in range(self.dim)]
        rows = [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]
        return from_rows(self.field, rows)

    def is_nilpotent(self, a: AElem) -> bool:
        m = self.mul_operator(a)
        acc = m
        for _ in range(self.dim):
            if all(x == 0 for x in acc.entries):
                return True
            from .linalg import mat_mul

            acc = mat_mul(acc, m)
        return all(x == 0 for x in acc.entries)

    def inverse(self, a: AElem) -> AElem | None:
        """Multiplicative inverse in A, or None when a is not a unit."""
        op = self.mul_operator(a)
        inv = invert(op)
        if inv is None:
            return None
        return tuple(mat_vec(inv, list(self.unit)))

    def power(self, a: AElem, k: int) -> AElem:
        acc = self.unit
        for _ in range(k):
            acc = self.mul(acc, a)
        return acc

    def fmt(self, a: AElem) -> str:
        return "(" + ", ".join(self.field.fmt(x) for x in a) + ")"

    @cached_property
    def _basis_labels(self) -> tuple[str, ...]:
        return tuple(f"b{i + 1}" for i in range(self.dim))


def apply_map(phi: Matrix, a: AElem) -> AElem:
    return tuple(mat_vec(phi, list(a)))


def rational_line(field: Field) -> CommAlgebra:
    """The base field itself viewed as a 1-dimensional algebra."""
    one = field.one()
    return CommAlgebra(field, 1, ((((one,),),)), (one,))


def truncated_polynomials(field: Field, degree: int) -> CommAlgebra:
    """k[t]/(t^degree) on the basis 1, t, ..., t^(degree-1)."""
    m = degree
    zero, one = field.zero(), field.one()
    table = []
    for i in range(m):
        row = []
        for j in range(m):
            vec = [zero] * m
            if i + j < m:
                vec[i + j] = one
            row.append(tuple(vec))
        table.append(tuple(row))
    unit = tuple(one if k == 0 else zero for k in range(m))
    return CommAlgebra(field, m, tuple(table), unit)


def tensor_truncated(field: Field, deg_x: int, deg_y: int) -> CommAlgebra:
    """k[x,y]/(x^deg_x, y^deg_y) on the monomial basis x^a y^b."""
    m = deg_x * deg_y
    zero, one = field.zero(), field.one()

    def idx(a, b):
        return a * deg_y + b

    table = []
    for i in range(m):
        ax, ay = divmod(i, deg_y)
        row = []
        for j in range(m):
            bx, by = divmod(j, deg_y)
            vec = [zero] * m
            if ax + bx < deg_x and ay + by < deg_y:
                vec[idx(ax + bx, ay + by)] = one
            row.append(tuple(vec))
        table.append(tuple(row))
    unit = tuple(one if k == 0 else zero for k in range(m))
    return CommAlgebra(field, m, tuple(table), unit)


def check_comm_algebra(alg: CommAlgebra, phi: Matrix, name: str = "algebra") -> Report:
    """Commutativity, associativity, unit law, and phi being an algebra map."""
    report = Report(name)
    if phi.rows != alg.dim or phi.cols != alg.dim:
        raise ValueError("twist matrix shape does not match algebra dimension")
    m = alg.dim

    for i in range(m):
        for j in range(i, m):
            if alg.mul_table[i][j] != alg.mul_table[j][i]:
                report.record_failure_once(
                    "algebra.commutative",
                    {
                        "pair": f"(b{i + 1}, b{j + 1})",
                        "lhs": alg.fmt(alg.mul_table[i][j]),
                        "rhs": alg.fmt(alg.mul_table[j][i]),
                    },
                )
    report.mark_pass_if_unreported("algebra.commutative")

    for i in range(m):
        for j in range(m):
            for l in range(m):
                lhs = alg.mul(alg.mul_table[i][j], alg.basis(l))
                rhs = alg.mul(alg.basis(i), alg.mul_table[j][l])
                if lhs != rhs:
                    report.record_failure_once(
                        "algebra.associative",
                        {
                            "triple": f"(b{i + 1}, b{j + 1}, b{l + 1})",
                            "lhs": alg.fmt(lhs),
                            "rhs": alg.fmt(rhs),
                        },
                    )
    report.mark_pass_if_unreported("algebra.associative")

    for i in range(m):
        prod = alg.mul(alg.unit, alg.basis(i))
        if prod != alg.basis(i):
            report.record_failure_once(
                "algebra.unit",
                {"basis": f"b{i + 1}", "lhs": alg.fmt(prod), "rhs": alg.fmt(alg.basis(i))},
            )
    report.mark_pass_if_unreported("algebra.unit")

    if apply_map(phi, alg.unit) != alg.unit:
        report.add(
            "twist.unit",
            False,
            {"lhs": alg.fmt(apply_map(phi, alg.unit)), "rhs": alg.fmt(alg.unit)},
        )
    else:
        report.add("twist.unit", True)

    for i in range(m):
        for j in range(i, m):
            lhs = apply_map(phi, alg.mul_table[i][j])
            rhs = alg.mul(apply_map(phi, alg.basis(i)), apply_map(phi, alg.basis(j)))
            if lhs != rhs:
                report.record_failure_once(
                    "twist.multiplicative",
                    {"pair": f"(b{i + 1}, b{j + 1})", "lhs": alg.fmt(lhs), "rhs": alg.fmt(rhs)},
                )
    report.mark_pass_if_unreported("twist.multiplicative")
    return report


def phi_derivation_space(alg: CommAlgebra, phi: Matrix) -> list[Matrix]:
    """Basis of Der_phi(A) as matrices acting on coefficient vectors.

    Solves delta(b_i b_j) = phi(b_i) delta(b_j) + phi(b_j) delta(b_i)
    for the m*m unknown entries of delta by one kernel computation.
    """
    m = alg.dim
    field = alg.field
    zero = field.zero()
    rows = []
    # Unknown layout: delta[k][l] at index k*m + l.
    for i in range(m):
        for j in range(i, m):
            pi = apply_map(phi, alg.basis(i))
            pj = apply_map(phi, alg.basis(j))
            tij = alg.mul_table[i][j]
            for k in range(m):
                coeff = [zero] * (m * m)
                # LHS: sum_l delta[k][l] * (b_i b_j)_l
                for l in range(m):
                    coeff[k * m + l] = coeff[k * m + l] + tij[l]
                # RHS: phi(b_i) * delta(b_j): component k of mul(pi, delta b_j)
                for u in range(m):
                    if pi[u] == 0:
                        continue
                    for v in range(m):
                        c = pi[u] * alg.mul_table[u][v][k]
                        if c != 0:
                            coeff[v * m + j] = coeff[v * m + j] - c
                for u in range(m):
                    if pj[u] == 0:
                        continue
                    for v in range(m):
                        c = pj[u] * alg.mul_table[u][v][k]
                        if c != 0:
                            coeff[v * m + i] = coeff[v * m + i] - c
                rows.append(coeff)
    if not rows:
        rows.append([zero] * (m * m))
    system = from_rows(field, rows)
    basis = []
    for vec in kernel_basis(system):
        ent = [[vec[k * m + l] for l in range(m)] for k in range(m)]
        basis.append(from_rows(field, ent))
    return basis


def is_phi_derivation(alg: CommAlgebra, phi: Matrix, delta: Matrix) -> bool:
    for i in range(alg.dim):
        for j in range(i, alg.dim):
            lhs = tuple(mat_vec(delta, list(alg.mul_table[i][j])))
            rhs = alg.add(
                alg.mul(apply_map(phi, alg.basis(i)), apply_map(delta, alg.basis(j))),
                alg.mul(apply_map(phi, alg.basis(j)), apply_map(delta, alg.basis(i))),
            )
            if lhs != rhs:
                return False
    return True
