from fractions import Fraction

from homger.algebra import (
    apply_map,
    check_comm_algebra,
    is_phi_derivation,
    phi_derivation_space,
    rational_line,
    tensor_truncated,
    truncated_polynomials,
)
from homger.field import QQ
from homger.linalg import from_rows, identity


def dual_numbers():
    return truncated_polynomials(QQ, 2)


def test_rational_line_valid():
    alg = rational_line(QQ)
    assert check_comm_algebra(alg, identity(QQ, 1)).ok


def test_dual_numbers_doubling_twist_valid():
    # phi(t) = 2t is multiplicative since phi(t^2) = 0 = (2t)^2
    alg = dual_numbers()
    phi = from_rows(QQ, [[1, 0], [0, 2]])
    assert check_comm_algebra(alg, phi).ok


def test_affine_twist_invalid_with_witness():
    # phi(t) = 1 + t: phi(t^2) = 0 but phi(t)^2 = 1 + 2t
    alg = dual_numbers()
    phi = from_rows(QQ, [[1, 1], [0, 1]])
    report = check_comm_algebra(alg, phi)
    assert not report.ok
    fails = {c.check_id for c in report.failures()}
    assert "twist.multiplicative" in fails
    witness = [c for c in report.failures() if c.check_id == "twist.multiplicative"][0]
    assert "(b2, b2)" in dict(witness.witness).get("pair", "")


def test_broken_commutativity_detected():
    alg = dual_numbers()
    table = [list(r) for r in alg.mul_table]
    table[0][1] = (Fraction(0), Fraction(1))
    table[1][0] = (Fraction(1), Fraction(0))
    bad = alg.__class__(QQ, 2, tuple(tuple(r) for r in table), alg.unit)
    report = check_comm_algebra(bad, identity(QQ, 2))
    assert any(c.check_id == "algebra.commutative" for c in report.failures())


def test_broken_associativity_detected():
    alg = truncated_polynomials(QQ, 3)
    table = [list(r) for r in alg.mul_table]
    # corrupt t*t to equal 1 instead of t^2: then (t*t)*t != t*(t*t)
    table[1][1] = (Fraction(1), Fraction(0), Fraction(0))
    table[1] = tuple(table[1])
    bad = alg.__class__(QQ, 3, tuple(tuple(r) for r in table), alg.unit)
    report = check_comm_algebra(bad, identity(QQ, 3))
    assert any(c.check_id == "algebra.associative" for c in report.failures())


def test_derivations_of_base_field_trivial():
    alg = rational_line(QQ)
    assert phi_derivation_space(alg, identity(QQ, 1)) == []


def test_derivations_of_dual_numbers_identity_twist():
    # delta(1) = 0 and 2t*delta(t) = 0 leaves delta(t) = c*t: dimension 1
    alg = dual_numbers()
    basis = phi_derivation_space(alg, identity(QQ, 2))
    assert len(basis) == 1
    (delta,) = basis
    assert apply_map(delta, (Fraction(1), Fraction(0))) == (Fraction(0), Fraction(0))
    img_t = apply_map(delta, (Fraction(0), Fraction(1)))
    assert img_t[0] == 0 and img_t[1] != 0
    assert is_phi_derivation(alg, identity(QQ, 2), delta)


def test_derivations_of_dual_numbers_doubling_twist():
    alg = dual_numbers()
    phi = from_rows(QQ, [[1, 0], [0, 2]])
    basis = phi_derivation_space(alg, phi)
    assert len(basis) == 1
    assert all(is_phi_derivation(alg, phi, d) for d in basis)


def test_derivation_space_members_satisfy_leibniz():
    alg = tensor_truncated(QQ, 2, 2)
    phi = identity(QQ, 4)
    basis = phi_derivation_space(alg, phi)
    # partial_x and partial_y live here, so at least dimension 2
    assert len(basis) >= 2
    assert all(is_phi_derivation(alg, phi, d) for d in basis)


def test_tensor_truncated_multiplication():
    alg = tensor_truncated(QQ, 2, 2)  # basis 1, y, x, xy
    x = alg.basis(2)
    y = alg.basis(1)
    assert alg.mul(x, y) == alg.basis(3)
    assert alg.mul(x, x) == alg.zero()
    assert alg.mul(alg.one(), x) == x


def test_nilpotence_and_inverse():
    alg = dual_numbers()
    t = alg.basis(1)
    assert alg.is_nilpotent(t)
    assert not alg.is_nilpotent(alg.one())
    one_plus_t = alg.add(alg.one(), t)
    inv = alg.inverse(one_plus_t)
    assert inv is not None
    assert alg.mul(one_plus_t, inv) == alg.one()
    assert alg.inverse(t) is None
