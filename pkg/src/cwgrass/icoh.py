"""Total I-cohomology via the splitting Im(beta) + W-cohomology.

An element is stored as a free part (a W-element in normal form) together
with a torsion part given by its mod-2 reduction, which lives in the image
of Sq^2 in the relevant twist.  Reduction is injective on the Bockstein
image, so this representation is faithful and equality is componentwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Tuple

from .chow import BGLContext, ChowContext, ChowElem, GrassContext, complementary_class, mod2_reduce
from .coeffs import WittModel, witt_model
from .steenrod import in_sq2_image, sq2, sq2_image, sq2_image_rref
from .symcore import InputError, Monomial
from .wcoh import InternalInconsistency, WElem, WRing, w_mul, w_ring

__all__ = [
    "PresentationIncompleteError",
    "ISpace",
    "IElem",
    "CharClass",
    "i_space",
    "char_class",
    "i_mul",
    "rho",
    "bockstein",
    "i_table",
    "i_basis",
]


class PresentationIncompleteError(InternalInconsistency):
    """A product's torsion part could not be determined from the relations."""


class ISpace:
    """I-cohomology of a Grassmannian or truncated BGL with a fixed Witt model."""

    def __init__(self, ctx: ChowContext, model: WittModel):
        self.ctx = ctx
        self.model = model
        self.wring: WRing = w_ring(ctx)
        self._rho_gen = self._generator_images()
        self._rho_cache: Dict[Monomial, ChowElem] = {}

    def __repr__(self) -> str:
        return f"ISpace({self.ctx.label}, {self.model.name})"

    @property
    def label(self) -> str:
        return self.ctx.label

    @property
    def dim(self) -> int:
        return self.ctx.dim

    def _generator_images(self) -> Dict[str, ChowElem]:
        ctx = self.ctx
        out: Dict[str, ChowElem] = {}
        for name in self.wring.names:
            if name == "e":
                out[name] = ctx.chern(ctx.rank, 2)
            elif name == "eq":
                out[name] = complementary_class(ctx, ctx.n - ctx.k, "F2")
            elif name == "R":
                out[name] = ctx.chern(ctx.k - 1, 2) * complementary_class(ctx, ctx.n - ctx.k, "F2")
            elif name.endswith("q"):
                c = complementary_class(ctx, int(name[1:-1]), "F2")
                out[name] = c * c
            else:
                c = ctx.chern(int(name[1:]), 2)
                out[name] = c * c
        return out

    def rho_monomial(self, m: Monomial) -> ChowElem:
        hit = self._rho_cache.get(m)
        if hit is None:
            hit = self.ctx.one(2)
            for name, e in zip(self.wring.names, m):
                for _ in range(e):
                    hit = hit * self._rho_gen[name]
            self._rho_cache[m] = hit
        return hit

    def rho_free(self, w: WElem) -> ChowElem:
        out = self.ctx.zero(2)
        for m, c in w.terms.items():
            if c % 2:
                out = out + self.rho_monomial(m)
        return out

    def elem(self, degree: int, twist: int, free: WElem | None = None, tors: ChowElem | None = None) -> "IElem":
        free = free if free is not None else self.wring.zero(self.model.modulus)
        tors = tors if tors is not None else self.ctx.zero(2)
        return IElem(self, degree, twist % 2, free, tors)

    def zero(self, degree: int = 0, twist: int = 0) -> "IElem":
        return self.elem(degree, twist)

    def one(self) -> "IElem":
        return self.elem(0, 0, self.wring.one(self.model.modulus))

    def free_monomial(self, m: Monomial, coeff: int = 1) -> "IElem":
        d, t = self.wring.bidegree(m)
        return self.elem(d, t, self.wring.elem({m: coeff}, self.model.modulus))

    def generator(self, name: str) -> "IElem":
        return self.free_monomial(self.wring.gen_mono(name))


@lru_cache(maxsize=None)
def _i_space(ctx: ChowContext, model_name: str) -> ISpace:
    return ISpace(ctx, witt_model(model_name))


def i_space(ctx: ChowContext, model: str | WittModel = "real") -> ISpace:
    name = model.name if isinstance(model, WittModel) else model
    return _i_space(ctx, name)


@dataclass(frozen=True, eq=False)
class IElem:
    """Homogeneous class in H^d(X, I^d(L)): free W-part plus torsion given by its rho-image."""

    space: ISpace
    degree: int
    twist: int
    free: WElem
    tors: ChowElem = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        sp = self.space
        if self.free.ring is not sp.wring:
            raise InternalInconsistency("free part belongs to a different W-ring")
        for bd in self.free.bidegrees():
            if bd != (self.degree, self.twist):
                raise InternalInconsistency(f"free part of bidegree {bd} in an element of ({self.degree},{self.twist})")
        tors = mod2_reduce(self.tors)
        if not tors.is_zero():
            if tors.degree != self.degree:
                raise InternalInconsistency("torsion part in the wrong degree")
            if not in_sq2_image(sp.ctx, self.twist, tors, self.degree):
                raise PresentationIncompleteError(
                    f"torsion part {tors} is not in the image of Sq^2 (degree {self.degree}, twist {self.twist})"
                )
        if self.degree > sp.dim:
            tors = sp.ctx.zero(2)
            object.__setattr__(self, "free", sp.wring.zero(sp.model.modulus))
        object.__setattr__(self, "tors", tors)

    def is_zero(self) -> bool:
        return self.free.is_zero() and self.tors.is_zero()

    def is_torsion(self) -> bool:
        return self.free.is_zero()

    def _check(self, other: "IElem") -> None:
        if self.space is not other.space:
            raise ValueError("I-elements from different spaces")

    def __add__(self, other: "IElem") -> "IElem":
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if (self.degree, self.twist) != (other.degree, other.twist):
            raise ValueError("cannot add elements of different bidegrees")
        return IElem(self.space, self.degree, self.twist, self.free + other.free, self.tors + other.tors)

    def __neg__(self) -> "IElem":
        return IElem(self.space, self.degree, self.twist, -self.free, self.tors)

    def __sub__(self, other: "IElem") -> "IElem":
        return self + (-other)

    def scale(self, a: int) -> "IElem":
        """Multiplication by a in W(F); torsion sees only a mod I."""
        w = self.space.model.reduce(a)
        t = self.tors if self.space.model.to_torsion(w) else self.space.ctx.zero(2)
        return IElem(self.space, self.degree, self.twist, self.free.scale(w), t)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return i_mul(self, other)

    def __pow__(self, e: int) -> "IElem":
        out = self.space.one()
        for _ in range(e):
            out = i_mul(out, self)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IElem):
            return NotImplemented
        if self.space is not other.space:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return (
            (self.degree, self.twist) == (other.degree, other.twist)
            and self.free == other.free
            and self.tors == other.tors
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.twist, hash(self.free), hash(self.tors)))

    def __str__(self) -> str:
        parts = []
        if not self.free.is_zero():
            parts.append(str(self.free))
        if not self.tors.is_zero():
            parts.append(f"tors[rho={self.tors}]")
        return " + ".join(parts) or "0"

    def __repr__(self) -> str:
        return f"IElem(({self.degree},{self.twist}): {self})"


def rho(x: IElem) -> ChowElem:
    """Reduction to the mod-2 Chow ring."""
    return x.space.rho_free(x.free) + x.tors


def i_mul(x: IElem, y: IElem) -> IElem:
    """Product: W-part by w_mul, torsion part from the rho-defect."""
    x._check(y)
    sp = x.space
    d, t = x.degree + y.degree, (x.twist + y.twist) % 2
    if d > sp.dim:
        return sp.zero(d, t)
    free = w_mul(x.free, y.free)
    target = rho(x) * rho(y)
    defect = target - sp.rho_free(free)
    if not defect.is_zero() and not in_sq2_image(sp.ctx, t, defect, d):
        raise PresentationIncompleteError(
            f"torsion part of {x} * {y} escapes Im Sq^2 in degree ({d},{t}): {defect}"
        )
    return IElem(sp, d, t, free, defect)


def bockstein(space: ISpace | ChowContext, twist: int, x: ChowElem) -> IElem:
    """beta_L(x): torsion class of degree d+1 with rho = Sq^2_L(x)."""
    sp = space if isinstance(space, ISpace) else i_space(space)
    x = mod2_reduce(x)
    d = x.degree if not x.is_zero() else 0
    return sp.elem(d + 1, twist, tors=sq2(sp.ctx, twist, x))


# ---------------------------------------------------------------------------
# characteristic classes


@dataclass(frozen=True)
class CharClass:
    """A named characteristic class.

    kind is one of "pontryagin", "euler", "bockstein", "R".  For Bockstein
    classes ``indices`` lists the Chern indices whose product is fed to
    beta (so beta_J in the usual notation has indices 2j for j in J) and
    ``twist`` selects beta (0) or tau (1).
    """

    kind: str
    index: int = 0
    side: str = "sub"
    indices: Tuple[int, ...] = ()
    twist: int = 0

    @staticmethod
    def pontryagin(i: int, side: str = "sub") -> "CharClass":
        return CharClass("pontryagin", index=i, side=side)

    @staticmethod
    def euler(side: str = "sub") -> "CharClass":
        return CharClass("euler", side=side)

    @staticmethod
    def bockstein(indices, twist: int = 0, side: str = "sub") -> "CharClass":
        return CharClass("bockstein", indices=tuple(indices), twist=twist, side=side)

    @staticmethod
    def R() -> "CharClass":
        return CharClass("R")


def _side_rank(ctx: ChowContext, side: str) -> int:
    if side == "sub":
        return ctx.rank
    if side == "quot" and isinstance(ctx, GrassContext):
        return ctx.n - ctx.k
    raise InputError(f"unknown bundle side {side!r}")


def _chern_bar(ctx: ChowContext, i: int, side: str) -> ChowElem:
    if side == "sub":
        return ctx.chern(i, 2)
    return complementary_class(ctx, i, "F2")


def _with_defect(sp: ISpace, free: WElem, target: ChowElem, d: int, t: int) -> IElem:
    defect = target - sp.rho_free(free)
    if not defect.is_zero() and not in_sq2_image(sp.ctx, t, defect, d):
        raise PresentationIncompleteError(f"class with rho {target} has no torsion correction in ({d},{t})")
    return IElem(sp, d, t, free, defect)


def char_class(space: ISpace | ChowContext, c: CharClass) -> IElem:
    sp = space if isinstance(space, ISpace) else i_space(space)
    ctx = sp.ctx
    mod = sp.model.modulus
    ring = sp.wring
    if c.kind == "R":
        if not ring.has("R"):
            raise InputError("R exists only when k(n-k) is odd")
        return sp.generator("R")
    rank = _side_rank(ctx, c.side)
    if c.kind == "pontryagin":
        i = c.index
        if not 1 <= i <= rank:
            raise InputError(f"Pontryagin index {i} out of range 1..{rank}")
        d = 2 * i
        target = _chern_bar(ctx, i, c.side) ** 2
        if i % 2:
            return sp.elem(d, 0, tors=target)
        name = f"p{i}" if c.side == "sub" else f"p{i}q"
        if not ring.has(name):
            # BGL_m with m even: the top Pontryagin class is e^2
            e = ring.gen("e", mod)
            return _with_defect(sp, w_mul(e, e), target, d, 0)
        return _with_defect(sp, ring.gen(name, mod), target, d, 0)
    if c.kind == "euler":
        if c.side == "sub" and ring.has("e"):
            return sp.generator("e")
        if c.side == "quot" and ring.has("eq"):
            return sp.generator("eq")
        # odd rank: torsion class reducing to the top Chern class
        return sp.elem(rank, 1, tors=_chern_bar(ctx, rank, c.side))
    if c.kind == "bockstein":
        for j in c.indices:
            if not 1 <= j <= rank:
                raise InputError(f"Chern index {j} out of range 1..{rank}")
        x = ctx.one(2)
        for j in c.indices:
            x = x * _chern_bar(ctx, j, c.side)
        return bockstein(sp, c.twist, x)
    raise InputError(f"unknown characteristic class kind {c.kind!r}")


# ---------------------------------------------------------------------------
# additive structure


def i_basis(space: ISpace | ChowContext, d: int, twist: int) -> List[IElem]:
    """Free normal-form monomials followed by an F2 basis of the torsion."""
    sp = space if isinstance(space, ISpace) else i_space(space)
    if d < 0 or d > sp.dim:
        return []
    out = [sp.free_monomial(m) for m in sp.wring.basis(d, twist)]
    out += [sp.elem(d, twist, tors=v) for v in sq2_image(sp.ctx, twist, d)]
    return out


def i_table(space: ISpace | ChowContext) -> List[dict]:
    """Rows {degree, twist, free_rank, torsion_rank} for d = 0..dim, twist 0 then 1."""
    sp = space if isinstance(space, ISpace) else i_space(space)
    rows = []
    for t in (0, 1):
        for d in range(sp.dim + 1):
            rows.append(
                {
                    "degree": d,
                    "twist": t,
                    "free_rank": len(sp.wring.basis(d, t)),
                    "torsion_rank": len(sq2_image_rref(sp.ctx, t, d)),
                }
            )
    return rows
