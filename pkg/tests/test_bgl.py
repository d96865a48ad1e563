import pytest

from cwgrass.bgl import (
    RPoly,
    bgl_presentation,
    bgl_space,
    check_even_rank_identity,
    check_ideal_preserved,
    check_odd_cokernel,
    check_type3_mod2,
    gen_bidegree,
    phi,
    phi_restrict,
    pontryagin_to_chow,
    pontryagin_whitney,
    relations,
    theta,
)
from cwgrass.chow import bgl_truncated, mod2_reduce
from cwgrass.icoh import rho
from cwgrass.steenrod import sq2
from cwgrass.symcore import InputError


def test_presentation_generators():
    gens = bgl_presentation(5).generators
    assert ("P", 1) in gens and ("P", 2) in gens and ("X",) in gens
    assert ("T", ()) in gens and ("B", ()) not in gens
    assert ("B", (1, 2)) in gens
    assert gen_bidegree(5, ("B", (1, 2))) == (7, 0)
    assert gen_bidegree(5, ("T", ())) == (1, 1)
    assert gen_bidegree(4, ("X",)) == (4, 1)


def test_phi_examples():
    assert phi(RPoly.gen(5, ("P", 2))) == RPoly.gen(4, ("X",)) * RPoly.gen(4, ("X",))
    assert phi(RPoly.gen(5, ("X",))) == RPoly(4, {})
    assert phi(RPoly.gen(5, ("P", 1))) == RPoly.gen(4, ("P", 1))
    with pytest.raises(InputError):
        phi(RPoly.gen(1, ("X",)))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_restriction_commutes_with_theta(n):
    sp, tp = bgl_space(n, 10), bgl_space(n - 1, 10)
    for g in bgl_presentation(n).generators:
        bd = gen_bidegree(n, g)
        if bd[0] > 10:
            continue
        assert phi_restrict(theta(sp, RPoly.gen(n, g))) == theta(tp, phi(RPoly.gen(n, g)), bd)


def test_euler_class_for_odd_rank_equals_tau():
    sp = bgl_space(5, 10)
    assert theta(sp, RPoly.gen(5, ("X",))) == theta(sp, RPoly.gen(5, ("T", (2,))))
    assert rho(theta(sp, RPoly.gen(5, ("X",)))) == bgl_truncated(5, 10).chern(5, 2)


def test_torsion_generators_are_2_torsion():
    sp = bgl_space(5, 10)
    for g in bgl_presentation(5).generators:
        if g[0] in "BT" and gen_bidegree(5, g)[0] <= 10:
            x = theta(sp, RPoly.gen(5, g))
            assert x.is_torsion() and x.scale(2).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_relations_vanish(n):
    sp = bgl_space(n, 12)
    for r in relations(n, 12):
        assert theta(sp, r.poly, r.bidegree).is_zero(), r.label


def test_wrong_relation_is_caught():
    # T{1} T{2} = B{1} B{2} + T0 P_{} T{1,2}; dropping the T0 term leaves a nonzero class
    n = 5
    sp = bgl_space(n, 12)
    T = lambda J: RPoly.gen(n, ("T", J))
    B = lambda J: RPoly.gen(n, ("B", J))
    wrong = T((1,)) * T((2,)) - B((1,)) * B((2,))
    assert not theta(sp, wrong).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_ideal_preserved(n):
    rep = check_ideal_preserved(n, 10)
    assert rep.passed, rep.failures


def test_ideal_preserved_small_n_is_vacuous():
    rep = check_ideal_preserved(2, 10)
    assert rep.passed and not rep.failures


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7, 8])
def test_type3_mod2(n):
    assert check_type3_mod2(n, 14).passed


@pytest.mark.parametrize("n", [2, 4, 6])
def test_even_rank_identity(n):
    assert check_even_rank_identity(n, 10).passed


@pytest.mark.parametrize("n", [3, 5])
def test_odd_cokernel(n):
    assert check_odd_cokernel(n, 10).passed


def test_pontryagin_to_chow():
    ctx = bgl_truncated(3, 6)
    c1, c2 = ctx.chern(1), ctx.chern(2)
    assert pontryagin_to_chow(3, 1, 6) == c2.scale(2) - c1 * c1
    for m in (2, 3, 4):
        D = 2 * m
        ctx = bgl_truncated(m, D)
        for i in range(1, m + 1):
            assert mod2_reduce(pontryagin_to_chow(m, i, D)) == ctx.chern(i, 2) ** 2


def test_pontryagin_whitney():
    assert str(pontryagin_whitney(1, 1, 0)) == "1⊗1"
    assert str(pontryagin_whitney(2, 2, 2)) == "p2⊗1 + p1⊗p1 + 1⊗p2"


@pytest.mark.parametrize("n", [3, 5, 6])
def test_odd_pontryagin_reduction(n):
    ctx = bgl_truncated(n, 2 * n + 2)
    for i in range(0, (n - 1) // 2 + 1):
        j = 2 * i + 1
        assert sq2(ctx, 0, ctx.chern(2 * i, 2) * ctx.chern(j, 2)) == ctx.chern(j, 2) ** 2
