import pytest

from cwgrass.chow import bgl_truncated, grassmannian
from cwgrass.wcoh import (
    InternalInconsistency,
    WRing,
    euler_mult_check,
    poincare_series,
    w_basis,
    w_mul,
    w_restrict,
    w_ring,
)


def test_bgl_even_is_free_on_p_and_e():
    ring = w_ring(bgl_truncated(4, 10))
    assert ring.names == ("p2", "e")
    assert ring.bidegree(ring.gen_mono("e")) == (4, 1)
    # monomials p2^a e^b, degree 4(a + b)
    assert poincare_series(bgl_truncated(4, 10), 0) == [1, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0]
    assert poincare_series(bgl_truncated(4, 10), 1) == [0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0]


def test_bgl_odd_has_no_euler_class():
    ring = w_ring(bgl_truncated(5, 10))
    assert ring.names == ("p2", "p4")
    assert sum(poincare_series(bgl_truncated(5, 10), 1)) == 0


def test_restriction_bgl():
    r4 = w_ring(bgl_truncated(4, 10))
    assert w_restrict(r4.gen("e")).is_zero()
    assert str(w_restrict(r4.gen("p2"))) == "p2"
    r3 = w_ring(bgl_truncated(3, 10))
    e2 = w_ring(bgl_truncated(2, 10)).gen("e")
    assert w_restrict(r3.gen("p2")) == w_mul(e2, e2)
    with pytest.raises(ValueError):
        w_restrict(w_ring(grassmannian(2, 4)).gen("e"))


def test_gr24_relations():
    ring = w_ring(grassmannian(2, 4))
    e, eq, p2, p2q = (ring.gen(x) for x in ("e", "eq", "p2", "p2q"))
    assert w_mul(e, e) == p2
    assert w_mul(p2, p2).is_zero()
    assert p2q == p2.scale(-1)
    assert w_mul(e, eq).is_zero()
    assert w_mul(eq, eq) == p2q


def test_gr24_bases():
    ctx = grassmannian(2, 4)
    ring = w_ring(ctx)
    assert [ring.format_mono(m) for m in w_basis(ctx, 0, 0)] == ["1"]
    assert sorted(ring.format_mono(m) for m in w_basis(ctx, 2, 1)) == ["e", "eq"]
    assert poincare_series(ctx, 0) == [1, 0, 0, 0, 1]
    assert poincare_series(ctx, 1) == [0, 0, 2, 0, 0]
    assert sum(poincare_series(ctx, 0)) + sum(poincare_series(ctx, 1)) == 4


def test_gr25_bases():
    ctx = grassmannian(2, 5)
    ring = w_ring(ctx)
    for d in (1, 2, 3):
        assert w_basis(ctx, d, 0) == []
    assert [ring.format_mono(m) for m in w_basis(ctx, 4, 0)] == ["p2"]
    # the twisted side carries e and e^3 (degrees 2 and 6)
    assert [ring.format_mono(m) for m in w_basis(ctx, 2, 1)] == ["e"]
    assert poincare_series(ctx, 1) == [0, 0, 1, 0, 0, 0, 1]


@pytest.mark.parametrize("n", [2, 4, 6])
def test_projective_odd_dimension_has_R(n):
    ctx = grassmannian(1, n)
    ring = w_ring(ctx)
    assert ring.has("R")
    assert ring.bidegree(ring.gen_mono("R")) == (n - 1, 0)
    assert w_mul(ring.gen("R"), ring.gen("R")).is_zero()


def test_total_rank_matches_rational_count():
    # total W-rank of Gr(k, n) equals the number of even-box partitions counted by pairs
    for k, n, total in [(2, 4, 4), (2, 5, 4), (1, 3, 2), (3, 6, 4)]:
        ctx = grassmannian(k, n)
        assert sum(poincare_series(ctx, 0)) + sum(poincare_series(ctx, 1)) == total


def test_broken_presentation_is_detected():
    good = w_ring(grassmannian(2, 4))
    e_eq = {(0, 1, 0, 1): 1}
    assert e_eq in good.relations
    bad = WRing("broken", good.gens, [r for r in good.relations if r != e_eq], strict_dim=4)
    # without e * eq = 0 an extra class survives in degree 4 and powers leak past the dimension
    assert len(bad.basis(4, 0)) == 2
    with pytest.raises(InternalInconsistency):
        for d in range(5, 9):
            for t in (0, 1):
                bad.basis(d, t)


@pytest.mark.parametrize("k, n, case", [(2, 4, 2), (3, 5, 3), (3, 6, 4), (2, 5, 4), (2, 6, 2), (1, 3, 3)])
def test_euler_mult_cases(k, n, case):
    r = euler_mult_check(grassmannian(k, n), "e^⊥")
    assert r.passed
    assert r.case == case


@pytest.mark.parametrize("k, n", [(k, n) for n in range(2, 8) for k in range(1, n) if k * (n - k) <= 10])
def test_euler_mult_all_small(k, n):
    for which in ("e_k", "e^⊥"):
        assert euler_mult_check(grassmannian(k, n), which).passed


def test_euler_mult_report_dict():
    d = euler_mult_check(grassmannian(2, 4), "e^⊥").as_dict()
    assert d["passed"] and d["case"] == 2
