import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from cwgrass.symcore import (
    FGAbelian,
    Generator,
    GradedPoly,
    GroupHom,
    InputError,
    f2_kernel,
    f2_rank,
    f2_solve,
    hermite_normal_form,
    lattice_equal,
    monomials_of_degree,
    partitions_in_box,
    pullback_group,
    schur_expand,
    schur_to_elementary,
    smith_normal_form,
    solve_in_lattice,
    vector_to_bits,
)


def test_partitions_in_box():
    assert sorted(partitions_in_box(2, 2, 2)) == [(1, 1), (2,)]
    assert [len(partitions_in_box(2, 2, d)) for d in range(5)] == [1, 1, 2, 1, 1]
    assert partitions_in_box(2, 3, 7) == []


def test_monomials_of_degree():
    assert sorted(monomials_of_degree([1, 2], 2)) == [(0, 1), (2, 0)]


def test_schur_expand_examples():
    assert schur_expand({(2, 0): 1}, 2, k=2) == {(2,): 1, (1, 1): 1}
    assert schur_expand({(0, 1): 1}, 1, k=2) == {(1, 1): 1}
    assert schur_expand({(3,): 1}, 2, k=1) == {}


def test_schur_roundtrip():
    # s_lam -> polynomial in e -> s_lam
    for lam in [(2, 1), (3, 1, 1), (2, 2), (1, 1, 1)]:
        assert schur_expand(schur_to_elementary(lam, 3), 5, k=3) == {lam: 1}


def test_graded_poly():
    gens = (Generator("x", 1), Generator("t", 1, 1))
    x, t = GradedPoly.gen(gens, 0), GradedPoly.gen(gens, 1)
    p = (x + t) ** 2
    assert p.terms == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
    assert set(p.components()) == {(2, 0), (2, 1)}
    assert (p.scale(2) + p.scale(-2)).is_zero()
    assert GradedPoly(gens, {(1, 1): 2}, modulus=2).is_zero()
    with pytest.raises(InputError):
        GradedPoly(gens, {(1,): 1})


@pytest.mark.parametrize(
    "M, factors",
    [([[2, 0], [0, 3]], (1, 6)), ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], (1, 1, 1)), ([[0]], ())],
)
def test_snf_examples(M, factors):
    res = smith_normal_form(M)
    assert res.factors == factors
    assert res.rank == len(factors)


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(r, c)) for c in zip(*B)] for r in A]


matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_snf_against_sympy(M):
    res = smith_normal_form(M)
    D = _matmul(_matmul([list(r) for r in res.U], M), [list(r) for r in res.V])
    for i, row in enumerate(D):
        for j, a in enumerate(row):
            assert a == (res.factors[i] if i == j and i < res.rank else 0)
    ref = sympy_snf(Matrix(M), domain=ZZ)
    ref_diag = sorted(abs(int(ref[i, i])) for i in range(min(ref.shape)) if ref[i, i] != 0)
    assert sorted(res.factors) == ref_diag


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_hnf_membership(M):
    H = hermite_normal_form(M)
    assert lattice_equal(H, M, len(M[0]))
    for row in M:
        assert solve_in_lattice(H, row) is not None


def test_f2_examples():
    assert f2_solve([[1, 1]], "kernel") == [(1, 1)]
    assert f2_solve([[0, 0], [0, 0]], "image") == []
    assert f2_solve([[1, 0], [1, 0]], "image") == [(1, 1)]
    with pytest.raises(InputError):
        f2_solve([[1]], "cokernel")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 63), min_size=1, max_size=7))
def test_f2_rank_nullity(cols):
    assert len(f2_kernel(cols)) + f2_rank(cols) == len(cols)
    for k in f2_kernel(cols):
        acc = 0
        for j, c in enumerate(cols):
            if k >> j & 1:
                acc ^= c
        assert acc == 0


def test_pullback_examples():
    Z, Z2, zero = FGAbelian.free(1), FGAbelian.elementary(1), FGAbelian.free(0)
    gw = pullback_group(GroupHom(Z, Z2, ((1,),)), GroupHom(Z, Z2, ((1,),)))
    assert (gw.free_rank, gw.torsion_invariants) == (2, ())
    assert pullback_group(GroupHom(Z2, Z2, ((1,),)), GroupHom(zero, Z2, ())).free_rank == 0
    assert pullback_group(GroupHom(Z2, Z2, ((1,),)), GroupHom(zero, Z2, ())).torsion_invariants == ()
    A = Z.direct_sum(Z2)
    g = pullback_group(GroupHom(A, Z2, ((1,), (1,))), GroupHom(Z, Z2, ((1,),)))
    assert (g.free_rank, g.torsion_invariants) == (2, ())


def test_pullback_inconsistent():
    with pytest.raises(InputError):
        GroupHom(FGAbelian.free(2), FGAbelian.free(1), ((1,),))


def test_vector_bits():
    assert vector_to_bits([1, 0, 3]) == 0b101
