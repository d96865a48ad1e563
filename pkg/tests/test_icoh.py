import pytest
from hypothesis import given, settings, strategies as st

from cwgrass.chow import complementary_class, grassmannian
from cwgrass.icoh import (
    CharClass,
    PresentationIncompleteError,
    bockstein,
    char_class,
    i_basis,
    i_mul,
    i_space,
    i_table,
    rho,
)
from cwgrass.symcore import InputError


def test_char_class_examples(gr24, gr25):
    b = char_class(gr25, CharClass.bockstein([2]))
    assert b.is_torsion() and (b.degree, b.twist) == (3, 0)
    assert rho(b) == gr25.chern(1, 2) * gr25.chern(2, 2)
    t0 = char_class(gr24, CharClass.bockstein([], twist=1))
    assert (t0.degree, t0.twist) == (1, 1) and rho(t0) == gr24.chern(1, 2)
    with pytest.raises(InputError):
        char_class(grassmannian(3, 5), CharClass.R())


def test_odd_pontryagin_is_torsion(gr25):
    p1 = char_class(gr25, CharClass.pontryagin(1))
    assert p1.is_torsion()
    assert rho(p1) == gr25.chern(1, 2) ** 2
    assert p1 == bockstein(gr25, 0, gr25.chern(1, 2))


def test_products_gr24(gr24):
    sp = i_space(gr24)
    t0 = bockstein(sp, 1, gr24.one(2))
    b1, b2 = bockstein(sp, 0, gr24.chern(1, 2)), bockstein(sp, 0, gr24.chern(2, 2))
    assert i_mul(t0, b1).is_zero()
    prod = i_mul(t0, b2)
    c2 = gr24.chern(2, 2)
    assert not prod.is_zero() and prod.is_torsion()
    assert rho(prod) == gr24.chern(1, 2) ** 2 * c2 == c2 * c2
    e, eq = char_class(sp, CharClass.euler()), char_class(sp, CharClass.euler("quot"))
    assert i_mul(e, eq).is_zero()


def test_rho_of_generators():
    ctx = grassmannian(2, 4)
    sp = i_space(ctx)
    assert rho(char_class(sp, CharClass.pontryagin(2))) == ctx.chern(2, 2) ** 2
    assert rho(char_class(sp, CharClass.euler("quot"))) == complementary_class(ctx, 2, "F2")
    g34 = grassmannian(3, 4)
    R = char_class(g34, CharClass.R())
    assert rho(R) == g34.chern(2, 2) * complementary_class(g34, 1, "F2")


def test_bockstein_examples(gr25):
    c1, c2 = gr25.chern(1, 2), gr25.chern(2, 2)
    assert rho(bockstein(gr25, 0, c1)) == c1 * c1
    assert bockstein(gr25, 0, c1 * c2).is_zero()
    assert bockstein(gr25, 0, gr25.one(2)).is_zero()


def test_i_table_gr25(gr25):
    rows = [r for r in i_table(gr25) if r["twist"] == 0]
    assert [r["free_rank"] for r in rows] == [1, 0, 0, 0, 1, 0, 0]
    assert [r["torsion_rank"] for r in rows] == [0, 0, 1, 1, 1, 0, 1]


def test_torsion_is_killed_by_fundamental_ideal(gr24):
    for d in range(5):
        for t in (0, 1):
            for x in i_basis(gr24, d, t):
                if x.is_torsion():
                    assert x.scale(2).is_zero()
                    assert x.scale(3) == x


def test_torsion_outside_image_is_rejected(gr25):
    sp = i_space(gr25)
    with pytest.raises(PresentationIncompleteError):
        sp.elem(2, 0, tors=gr25.chern(2, 2))


def test_vanishing_above_dimension(gr24):
    sp = i_space(gr24)
    p2 = char_class(sp, CharClass.pontryagin(2))
    t0 = bockstein(sp, 1, gr24.one(2))
    assert i_mul(p2, t0).is_zero()


def test_quadratically_closed_model(gr24):
    sp = i_space(gr24, "quadratically-closed")
    e = char_class(sp, CharClass.euler())
    assert (e * e).free == char_class(sp, CharClass.pontryagin(2)).free
    assert char_class(sp, CharClass.pontryagin(2)).scale(2).is_zero()


SPACE = grassmannian(3, 6)
BASIS = [x for d in range(SPACE.dim + 1) for t in (0, 1) for x in i_basis(SPACE, d, t)]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(BASIS), st.sampled_from(BASIS), st.sampled_from(BASIS))
def test_ring_laws_gr36(x, y, z):
    xy = i_mul(x, y)
    assert rho(xy) == rho(x) * rho(y)
    sign = -1 if (x.degree * y.degree) % 2 else 1
    yx = i_mul(y, x)
    assert xy.free == yx.free.scale(sign) and xy.tors == yx.tors
    assert i_mul(xy, z) == i_mul(x, i_mul(y, z))
