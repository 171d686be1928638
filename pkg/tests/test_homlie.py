import pytest

from homger.field import QQ, PrimeField
from homger.homlie import (
    HomLieRep,
    adjoint_rep,
    check_hom_lie,
    check_hom_lie_rep,
    hom_lie_algebra,
)
from homger.linalg import from_rows, identity, zeros


def abelian(n=2, alpha=None):
    return hom_lie_algebra(QQ, n, {}, alpha or identity(QQ, n).to_rows())


def heisenberg(alpha=None):
    # [e1,e2] = e3
    return hom_lie_algebra(
        QQ, 3, {(0, 1): (0, 0, 1)}, alpha or identity(QQ, 3).to_rows()
    )


def heisenberg_twisted():
    return hom_lie_algebra(QQ, 3, {(0, 1): (0, 0, 1)}, [[2, 0, 0], [0, 3, 0], [0, 0, 6]])


def sl2(alpha=None):
    # basis h, e, f: [h,e] = 2e, [h,f] = -2f, [e,f] = h
    return hom_lie_algebra(
        QQ,
        3,
        {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)},
        alpha or identity(QQ, 3).to_rows(),
    )


def test_abelian_valid_any_twist():
    assert check_hom_lie(abelian(2, [[2, 1], [0, 3]])).ok


def test_heisenberg_diag_twist_valid():
    assert check_hom_lie(heisenberg_twisted()).ok


def test_sl2_classical_valid():
    assert check_hom_lie(sl2()).ok


def test_sl2_bad_twist_fails_morphism():
    g = sl2([[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    report = check_hom_lie(g)
    assert not report.ok
    assert any(c.check_id == "lie.twist_morphism" for c in report.failures())


def test_jacobi_violation_detected():
    # [e1,e2] = e3, [e1,e3] = e1 fails Jacobi on (e1,e2,e3)
    g = hom_lie_algebra(
        QQ, 3, {(0, 1): (0, 0, 1), (0, 2): (1, 0, 0)}, identity(QQ, 3).to_rows()
    )
    report = check_hom_lie(g)
    assert any(c.check_id == "lie.hom_jacobi" for c in report.failures())


def test_prime_field_heisenberg():
    F = PrimeField(7)
    g = hom_lie_algebra(
        F,
        3,
        {(0, 1): (F.scalar(0), F.scalar(0), F.scalar(1))},
        [[2, 0, 0], [0, 3, 0], [0, 0, 6]],
    )
    assert check_hom_lie(g).ok


def test_trivial_rep_valid():
    g = heisenberg()
    rep = HomLieRep(2, (zeros(QQ, 2, 2),) * 3, identity(QQ, 2))
    assert check_hom_lie_rep(g, rep).ok


@pytest.mark.parametrize("s", [-1, 0, 1, 2])
def test_adjoint_rep_valid_on_regular_catalog(s):
    for g in [abelian(), heisenberg(), heisenberg_twisted(), sl2()]:
        rep = adjoint_rep(g, s)
        assert check_hom_lie_rep(g, rep).ok, f"s={s}"


def test_adjoint_abelian_is_zero():
    rep = adjoint_rep(abelian(), 3)
    assert all(all(x == 0 for x in m.entries) for m in rep.rho)


def test_adjoint_classical_matches_bracket():
    g = heisenberg()
    rep = adjoint_rep(g, 0)
    # ad(e1)(e2) = e3
    col = [rep.rho[0].at(k, 1) for k in range(3)]
    assert col == [QQ.zero(), QQ.zero(), QQ.one()]


def test_adjoint_twisted_value():
    # alpha = diag(2,3,6), s = 1: ad_1(e1)(e2) = [2 e1, e2] = 2 e3
    rep = adjoint_rep(heisenberg_twisted(), 1)
    col = [rep.rho[0].at(k, 1) for k in range(3)]
    assert col == [QQ.zero(), QQ.zero(), QQ.scalar(2)]


def test_adjoint_wrong_value_twist_detected():
    g = heisenberg_twisted()
    rep = adjoint_rep(g, 0)
    broken = HomLieRep(rep.dim, rep.rho, identity(QQ, 3))
    report = check_hom_lie_rep(g, broken)
    assert not report.ok


def test_adjoint_negative_power_needs_regular():
    g = hom_lie_algebra(QQ, 2, {}, [[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        adjoint_rep(g, -1)
