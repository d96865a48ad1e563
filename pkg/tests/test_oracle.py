from math import comb

import pytest

from cwgrass.chow import chow_mul, grassmannian
from cwgrass.oracle import axiom_sweep, lr_coefficient, lr_product, partition_rank, pullback_type_oracle


def test_lr_examples():
    assert lr_product((1,), (1,), 2, 4) == {(2,): 1, (1, 1): 1}
    assert lr_product((2, 2), (1,), 2, 4) == {}
    assert lr_product((), (2, 1), 3, 6) == {(2, 1): 1}
    # the classical coefficient c^{(3,2,1)}_{(2,1),(2,1)} = 2
    assert lr_coefficient((2, 1), (2, 1), (3, 2, 1)) == 2


def test_partition_rank():
    assert partition_rank(2, 4, 2) == 2
    assert partition_rank(3, 7, 0) == 1
    assert partition_rank(2, 5, 7) == 0
    assert sum(partition_rank(3, 7, d) for d in range(13)) == comb(7, 3)


def test_chow_matches_lr_gr37():
    ctx = grassmannian(3, 7)
    keys = [p for d in range(ctx.dim + 1) for p in ctx.basis(d)]
    for a in keys[:12]:
        for b in keys:
            assert dict(chow_mul(ctx.basis_elem(a), ctx.basis_elem(b)).terms) == lr_product(a, b, 3, 7)


@pytest.mark.parametrize("k, n", [(2, 4), (2, 5), (1, 3)])
def test_axiom_sweep_passes(k, n):
    rep = axiom_sweep(grassmannian(k, n))
    assert rep.passed, rep.counterexample
    assert rep.checked > 0


def test_axiom_sweep_catches_corrupted_product():
    ctx = grassmannian(2, 4)

    def bad_mul(x, y):
        z = chow_mul(x, y)
        if x.degrees() == [1] and y.degrees() == [1]:
            z = z + ctx.basis_elem((2,), z.modulus)
        return z

    rep = axiom_sweep(ctx, mul=bad_mul)
    assert not rep.passed
    assert rep.counterexample
    assert rep.as_dict()["passed"] is False


def test_axiom_sweep_respects_max_dim():
    rep = axiom_sweep(grassmannian(3, 7), max_dim=9)
    assert not rep.passed and "exceeds" in rep.counterexample


@pytest.mark.parametrize("d, t", [(d, t) for d in range(7) for t in (0, 1)])
def test_pullback_oracle_gr25(d, t):
    assert pullback_type_oracle(grassmannian(2, 5), d, t).passed
