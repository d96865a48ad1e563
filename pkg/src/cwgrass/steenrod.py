"""Twisted and untwisted Steenrod squares on mod-2 Chow rings.

Sq^2_O is the derivation with Sq^2(c_j) = c_1 c_j + (j - 1) c_{j+1} on the
Chern generators (out-of-range classes are zero).  The twist by the
determinant line adds multiplication by c_1: Sq^2_det(x) = c_1 x + Sq^2_O(x).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from .chow import ChowContext, ChowElem, lift_to_integers
from .symcore import Monomial, f2_in_span, f2_kernel, f2_rref, hermite_normal_form, solve_in_lattice

__all__ = [
    "Twist",
    "sq2",
    "sq2_matrix",
    "sq2_kernel",
    "sq2_image",
    "sq2_image_rref",
    "in_sq2_image",
    "ker_partial",
    "KerPartial",
    "wu_generator",
]


class Twist(int):
    """Element of Pic/2 = Z/2: 0 is the trivial duality, 1 the determinant line."""

    def __new__(cls, value: int):
        if value not in (0, 1):
            raise ValueError("twist must be 0 or 1")
        return super().__new__(cls, value)

    def __add__(self, other):  # type: ignore[override]
        return Twist((int(self) + int(other)) % 2)


def _check_twist(twist: int) -> int:
    if twist not in (0, 1):
        raise ValueError("twist must be 0 or 1")
    return int(twist)


def wu_generator(rank: int, j: int) -> Dict[Monomial, int]:
    """Sq^2_O(c_j) = c_1 c_j + (j-1) c_{j+1} as a c-polynomial mod 2."""
    out: Dict[Monomial, int] = {}
    mono = [0] * rank
    mono[0] += 1
    mono[j - 1] += 1
    out[tuple(mono)] = 1
    if (j - 1) % 2 and j + 1 <= rank:
        nxt = [0] * rank
        nxt[j] = 1
        out[tuple(nxt)] = 1
    return out


def _sq2_cpoly(rank: int, poly: Dict[Monomial, int]) -> Dict[Monomial, int]:
    out: Dict[Monomial, int] = {}
    for mono, c in poly.items():
        if not c % 2:
            continue
        for j, e in enumerate(mono):
            if not e % 2:
                continue  # derivative of an even power vanishes mod 2
            rest = list(mono)
            rest[j] -= 1
            for m2, a in wu_generator(rank, j + 1).items():
                m = tuple(x + y for x, y in zip(rest, m2))
                out[m] = (out.get(m, 0) + a) % 2
    return {m: c for m, c in out.items() if c}


@lru_cache(maxsize=None)
def _sq2_basis(ctx: ChowContext, key) -> ChowElem:
    poly = {m: c % 2 for m, c in ctx.cpoly(key).items() if c % 2}
    return ctx.from_cpoly(_sq2_cpoly(ctx.rank, poly), 2)


def sq2(ctx: ChowContext, twist: int, x: ChowElem) -> ChowElem:
    """Sq^2_L on a homogeneous F2 element."""
    twist = _check_twist(twist)
    if x.ctx != ctx:
        raise ValueError("element does not belong to this context")
    if not x.is_homogeneous():
        raise ValueError("Sq^2 needs a homogeneous input")
    x = x if x.modulus == 2 else ChowElem(ctx, 2, dict(x.terms))
    out = ctx.zero(2)
    for key, c in x.terms.items():
        if c % 2:
            out = out + _sq2_basis(ctx, key)
    if twist:
        out = out + ctx.chern(1, 2) * x
    return out


@lru_cache(maxsize=None)
def sq2_matrix(ctx: ChowContext, twist: int, d: int) -> Tuple[int, ...]:
    """Columns (as bitsets over basis(d+1)) of Sq^2_L : Ch^d -> Ch^{d+1}."""
    return tuple(sq2(ctx, twist, b).bits(d + 1) for b in ctx.basis_elems(d, 2))


def sq2_kernel(ctx: ChowContext, twist: int, d: int) -> List[ChowElem]:
    twist = _check_twist(twist)
    cols = sq2_matrix(ctx, twist, d)
    return [ctx.from_bits(d, v) for v in f2_kernel(list(cols), len(cols))]


@lru_cache(maxsize=None)
def sq2_image_rref(ctx: ChowContext, twist: int, d: int) -> Tuple[int, ...]:
    if d < 1:
        return ()
    return tuple(f2_rref(sq2_matrix(ctx, twist, d - 1)))


def sq2_image(ctx: ChowContext, twist: int, d: int) -> List[ChowElem]:
    """Basis of Sq^2_L(Ch^{d-1}) inside Ch^d."""
    twist = _check_twist(twist)
    return [ctx.from_bits(d, v) for v in sq2_image_rref(ctx, twist, d)]


def in_sq2_image(ctx: ChowContext, twist: int, x: ChowElem, d: int | None = None) -> bool:
    if x.is_zero():
        return True
    d = x.degree if d is None else d
    return f2_in_span(x.bits(d), sq2_image_rref(ctx, twist, d))


@dataclass(frozen=True)
class KerPartial:
    """ker(d_L) in CH^d: integral lift of ker Sq^2_L plus 2 CH^d."""

    ctx: ChowContext
    twist: int
    degree: int
    generators: Tuple[ChowElem, ...]

    def lattice(self) -> List[List[int]]:
        """HNF basis in coordinates of basis(d)."""
        n = len(self.ctx.basis(self.degree))
        return hermite_normal_form([g.vector(self.degree) for g in self.generators], n)

    def contains(self, x: ChowElem) -> bool:
        if x.modulus != 0:
            raise ValueError("membership is tested on integral classes")
        if x.is_zero():
            return True
        if x.degree != self.degree:
            return False
        return sq2(self.ctx, self.twist, ChowElem(self.ctx, 2, dict(x.terms))).is_zero()

    def coordinates(self, x: ChowElem) -> List[int] | None:
        return solve_in_lattice(self.lattice(), x.vector(self.degree))


def ker_partial(ctx: ChowContext, twist: int, d: int) -> KerPartial:
    twist = _check_twist(twist)
    gens = [lift_to_integers(x) for x in sq2_kernel(ctx, twist, d)]
    gens += [b.scale(2) for b in ctx.basis_elems(d, 0)]
    return KerPartial(ctx, twist, d, tuple(gens))
