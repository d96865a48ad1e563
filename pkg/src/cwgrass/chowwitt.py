"""Chow-Witt groups and products as the fiber product of I-cohomology and ker(d) over Ch."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .chow import ChowContext, ChowElem, GrassContext, mod2_reduce
from .coeffs import ConfigurationError
from .icoh import CharClass, IElem, ISpace, char_class, i_mul, i_space, rho
from .steenrod import ker_partial, sq2_image_rref
from .symcore import (
    AbelianGroupType,
    FGAbelian,
    GroupHom,
    InputError,
    f2_coordinates,
    hermite_normal_form,
    monomials_of_degree,
    pullback_generators,
    pullback_group,
)
from .wcoh import InternalInconsistency

__all__ = [
    "UnsupportedModelError",
    "CWElem",
    "CWPresentation",
    "cw_presentation",
    "cw_group",
    "cw_mul",
    "cw_euler",
    "cw_pontryagin",
    "cw_elem",
    "generated_lattice",
    "cw_group_generators",
    "cw_one",
    "pontryagin_chow_component",
]


class UnsupportedModelError(ConfigurationError):
    """The requested computation is only available for the real Witt model."""


@dataclass(frozen=True, eq=False)
class CWElem:
    """A pair (I-cohomology class, integral Chow class) with rho(i) = z mod 2."""

    i: IElem
    z: ChowElem

    def __post_init__(self):
        if self.z.modulus != 0:
            raise InternalInconsistency("Chow component must be integral")
        if rho(self.i) != mod2_reduce(self.z):
            raise InternalInconsistency(f"incompatible pair: rho({self.i}) != {self.z} mod 2")

    @property
    def degree(self) -> int:
        return self.i.degree

    @property
    def twist(self) -> int:
        return self.i.twist

    def __add__(self, other: "CWElem") -> "CWElem":
        return CWElem(self.i + other.i, self.z + other.z)

    def __neg__(self) -> "CWElem":
        return CWElem(-self.i, -self.z)

    def __sub__(self, other: "CWElem") -> "CWElem":
        return self + (-other)

    def __mul__(self, other: "CWElem") -> "CWElem":
        return cw_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CWElem):
            return NotImplemented
        return self.i == other.i and self.z == other.z

    def __hash__(self) -> int:
        return hash((self.i, self.z))

    def __str__(self) -> str:
        return f"({self.i}, {self.z})"

    def __repr__(self) -> str:
        return f"CWElem{self}"


def cw_elem(i: IElem, z: ChowElem) -> CWElem:
    return CWElem(i, z)


def cw_mul(x: CWElem, y: CWElem) -> CWElem:
    """Componentwise product in the fiber product ring."""
    return CWElem(i_mul(x.i, y.i), x.z * y.z)


def cw_one(space: ISpace) -> CWElem:
    return CWElem(space.one(), space.ctx.one())


def cw_euler(ctx: ChowContext, model: str = "real") -> CWElem:
    """(e, c_top) in the determinant twist."""
    sp = i_space(ctx, model)
    return CWElem(char_class(sp, CharClass.euler()), ctx.chern(ctx.rank))


def pontryagin_chow_component(ctx: ChowContext, i: int) -> ChowElem:
    """(-1)^i c_i^2 + 2 sum_{j=max(0,2i-r)}^{i-1} (-1)^j c_j c_{2i-j} in CH(ctx)."""
    ci = ctx.chern(i)
    out = (ci * ci).scale(-1 if i % 2 else 1)
    for j in range(max(0, 2 * i - ctx.rank), i):
        out = out + (ctx.chern(j) * ctx.chern(2 * i - j)).scale(2 * (-1 if j % 2 else 1))
    return out


def cw_pontryagin(ctx: ChowContext, i: int, model: str = "real") -> CWElem:
    sp = i_space(ctx, model)
    return CWElem(char_class(sp, CharClass.pontryagin(i)), pontryagin_chow_component(ctx, i))


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class CWPresentation:
    """The two maps A -> C <- B whose pullback is CW^d(X, L).

    A = I-cohomology at (d, twist) as Z^f + (Z/2)^s, B = ker(d_L) as a lattice
    in CH^d with basis ``kernel_basis``, C = Ch^d.
    """

    degree: int
    twist: int
    free_rank: int
    torsion_rank: int
    chow_rank: int
    kernel_basis: Tuple[Tuple[int, ...], ...]
    f: GroupHom
    g: GroupHom


def cw_presentation(ctx: ChowContext, d: int, twist: int, model: str = "real") -> CWPresentation:
    sp = i_space(ctx, model)
    if not 0 <= d <= ctx.dim:
        raise InputError(f"degree {d} out of range 0..{ctx.dim}")
    r = len(ctx.basis(d))
    free = sp.wring.basis(d, twist)
    tors = sq2_image_rref(ctx, twist, d)
    f_, s = len(free), len(tors)
    A = FGAbelian(f_, ()).direct_sum(FGAbelian.elementary(s))
    C = FGAbelian.elementary(r)
    rows = [tuple(sp.rho_monomial(m).vector(d)) for m in free]
    rows += [tuple((v >> j) & 1 for j in range(r)) for v in tors]
    K = ker_partial(ctx, twist, d).lattice()
    if len(K) != r:
        raise InternalInconsistency("ker(d) must have full rank since it contains 2 CH^d")
    B = FGAbelian.free(len(K))
    return CWPresentation(
        d, twist, f_, s, r, tuple(map(tuple, K)), GroupHom(A, C, tuple(rows)), GroupHom(B, C, tuple(map(tuple, K)))
    )


@lru_cache(maxsize=None)
def _cw_group(ctx: ChowContext, d: int, twist: int) -> AbelianGroupType:
    pres = cw_presentation(ctx, d, twist, "real")
    return pullback_group(pres.f, pres.g)


def cw_group(ctx: ChowContext, d: int, twist: int, model: str = "real") -> AbelianGroupType:
    """Isomorphism type of CW^d(X, L) via the pullback presentation."""
    if model != "real":
        raise UnsupportedModelError("group types are only computed for the real Witt model")
    return _cw_group(ctx, d, twist % 2)


def cw_group_generators(ctx: ChowContext, d: int, twist: int) -> List[CWElem]:
    """Lattice basis of the pullback, as explicit compatible pairs."""
    pres = cw_presentation(ctx, d, twist, "real")
    sp = i_space(ctx, "real")
    K, _ = pullback_generators(pres.f, pres.g)
    free = sp.wring.basis(d, twist)
    tors = sq2_image_rref(ctx, twist, d)
    out = []
    na = pres.free_rank + pres.torsion_rank
    for row in K:
        a, b = row[:na], row[na:]
        x = sp.zero(d, twist)
        for m, c in zip(free, a[: pres.free_rank]):
            if c:
                x = x + sp.free_monomial(m, c)
        for v, c in zip(tors, a[pres.free_rank:]):
            if c % 2:
                x = x + sp.elem(d, twist, tors=ctx.from_bits(d, v))
        z = ctx.zero()
        for krow, c in zip(pres.kernel_basis, b):
            z = z + ctx.from_vector(d, krow).scale(c)
        out.append(CWElem(x, z))
    return out


def generated_lattice(
    ctx: ChowContext, d: int, ring_gens: Sequence[ChowElem], module_gens: Sequence[ChowElem] | None = None
) -> List[List[int]]:
    """HNF of the degree-d part of sum_g g * Z[ring_gens] (module_gens default to {1})."""
    module_gens = list(module_gens) if module_gens is not None else [ctx.one()]
    rows = []
    ring_gens = [x for x in ring_gens if not x.is_zero()]  # truncated away in BGL contexts
    degs = [x.degree for x in ring_gens]
    for g in module_gens:
        if g.is_zero() or g.degree > d:
            continue
        for exps in monomials_of_degree(degs, d - g.degree):
            term = g
            for x, e in zip(ring_gens, exps):
                for _ in range(e):
                    term = term * x
            rows.append(term.vector(d))
    return hermite_normal_form(rows, len(ctx.basis(d)))
