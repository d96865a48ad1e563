"""Integral and mod-2 Chow rings of Gr(k, n) and of degree-truncated BGL_m.

Sign convention: the Chern roots are those of the dual tautological
subbundle, so c_i(S) = (-1)^i e_i and the Chern class c_i is the Schur class
(-1)^i s_(1^i).  The complementary classes come out as c_i^perp = s_(i).
Mod 2 the signs disappear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, Hashable, Iterable, List, Mapping, Sequence, Tuple

from .symcore import (
    InputError,
    Monomial,
    Partition,
    f2_kernel,
    monomials_of_degree,
    poly_mul,
    schur_expand,
    schur_expand_monomial,
    schur_to_elementary,
    elementary_exponents,
)

__all__ = [
    "ChowContext",
    "GrassContext",
    "BGLContext",
    "ChowElem",
    "ChernTensor",
    "grassmannian",
    "bgl_truncated",
    "chow_mul",
    "complementary_class",
    "mod2_reduce",
    "mult_kernel_by",
    "whitney_restrict_chern",
    "ContextMismatch",
]

Key = Hashable


class ContextMismatch(ValueError):
    """Elements from different rings were combined."""


def _mod(c: int, modulus: int) -> int:
    return c % modulus if modulus else c


class ChowContext:
    """Common interface of the Grassmannian and BGL Chow rings.

    Keys index the additive basis; ``cpoly`` writes a basis element as a
    polynomial in the Chern classes c_1..c_r and ``from_cpoly`` goes back.
    """

    kind: str = ""
    rank: int = 0  # number of Chern generators
    dim: int = 0  # top degree (truncation degree for BGL)

    def basis(self, d: int) -> Tuple[Key, ...]:
        raise NotImplementedError

    def key_degree(self, key: Key) -> int:
        raise NotImplementedError

    def mul_keys(self, a: Key, b: Key) -> Dict[Key, int]:
        raise NotImplementedError

    def cpoly(self, key: Key) -> Dict[Monomial, int]:
        raise NotImplementedError

    def from_cpoly(self, poly: Mapping[Monomial, int], modulus: int = 0) -> "ChowElem":
        raise NotImplementedError

    def format_key(self, key: Key) -> str:
        raise NotImplementedError

    # -- derived helpers -------------------------------------------------

    def ranks(self) -> List[int]:
        return [len(self.basis(d)) for d in range(self.dim + 1)]

    def index(self, d: int) -> Dict[Key, int]:
        return _index_cache(self, d)

    def elem(self, terms: Mapping[Key, int], modulus: int = 0, truncated: bool = False) -> "ChowElem":
        return ChowElem(self, modulus, dict(terms), truncated)

    def zero(self, modulus: int = 0) -> "ChowElem":
        return ChowElem(self, modulus, {})

    def one(self, modulus: int = 0) -> "ChowElem":
        return ChowElem(self, modulus, {self.basis(0)[0]: 1})

    def basis_elem(self, key: Key, modulus: int = 0) -> "ChowElem":
        return ChowElem(self, modulus, {key: 1})

    def basis_elems(self, d: int, modulus: int = 0) -> List["ChowElem"]:
        return [self.basis_elem(key, modulus) for key in self.basis(d)]

    def chern(self, i: int, modulus: int = 0) -> "ChowElem":
        """Chern class c_i of the tautological (sub)bundle; c_0 = 1, zero out of range."""
        if i == 0:
            return self.one(modulus)
        if i < 0 or i > self.rank:
            return self.zero(modulus)
        mono = tuple(1 if j == i - 1 else 0 for j in range(self.rank))
        return self.from_cpoly({mono: 1}, modulus)

    def from_vector(self, d: int, vec: Sequence[int], modulus: int = 0) -> "ChowElem":
        keys = self.basis(d)
        return ChowElem(self, modulus, {k: c for k, c in zip(keys, vec) if c})

    def from_bits(self, d: int, bits: int) -> "ChowElem":
        keys = self.basis(d)
        return ChowElem(self, 2, {k: 1 for j, k in enumerate(keys) if (bits >> j) & 1})


@lru_cache(maxsize=None)
def _index_cache(ctx: ChowContext, d: int) -> Dict[Key, int]:
    return {k: i for i, k in enumerate(ctx.basis(d))}


@dataclass(frozen=True, eq=False)
class ChowElem:
    """Element of CH (modulus 0) or Ch (modulus 2) in the context's canonical basis."""

    ctx: ChowContext
    modulus: int
    terms: Mapping[Key, int] = field(default_factory=dict)
    truncated: bool = False

    def __post_init__(self):
        clean = {}
        for k, c in self.terms.items():
            c = _mod(c, self.modulus)
            if c:
                clean[k] = c
        object.__setattr__(self, "terms", clean)

    # -- structure -------------------------------------------------------

    def degrees(self) -> List[int]:
        return sorted({self.ctx.key_degree(k) for k in self.terms})

    @property
    def degree(self) -> int:
        """Degree of a homogeneous element (0 for the zero element)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("inhomogeneous element has no single degree")
        return ds[0] if ds else 0

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def component(self, d: int) -> "ChowElem":
        return ChowElem(
            self.ctx, self.modulus, {k: c for k, c in self.terms.items() if self.ctx.key_degree(k) == d}
        )

    def vector(self, d: int) -> List[int]:
        return [self.terms.get(k, 0) for k in self.ctx.basis(d)]

    def bits(self, d: int | None = None) -> int:
        if d is None:
            d = self.degree
        idx = self.ctx.index(d)
        out = 0
        for k, c in self.terms.items():
            if c % 2 and k in idx:
                out |= 1 << idx[k]
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "ChowElem") -> None:
        if not isinstance(other, ChowElem):
            raise TypeError("expected a ChowElem")
        if self.ctx != other.ctx:
            raise ContextMismatch("elements belong to different Chow rings")
        if self.modulus != other.modulus:
            raise ContextMismatch("elements have different coefficient rings")

    def __add__(self, other: "ChowElem") -> "ChowElem":
        self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return ChowElem(self.ctx, self.modulus, t, self.truncated or other.truncated)

    def __neg__(self) -> "ChowElem":
        return ChowElem(self.ctx, self.modulus, {k: -c for k, c in self.terms.items()}, self.truncated)

    def __sub__(self, other: "ChowElem") -> "ChowElem":
        return self + (-other)

    def scale(self, a: int) -> "ChowElem":
        return ChowElem(self.ctx, self.modulus, {k: a * c for k, c in self.terms.items()}, self.truncated)

    def __rmul__(self, a: int) -> "ChowElem":
        if isinstance(a, int):
            return self.scale(a)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return chow_mul(self, other)

    def __pow__(self, e: int) -> "ChowElem":
        out = self.ctx.one(self.modulus)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChowElem):
            return NotImplemented
        return self.ctx == other.ctx and self.modulus == other.modulus and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ctx, self.modulus, tuple(sorted(self.terms.items(), key=repr))))

    def __repr__(self) -> str:
        return f"ChowElem({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda k: (self.ctx.key_degree(k), k), reverse=True)
        parts = []
        for k in keys:
            c = self.terms[k]
            body = self.ctx.format_key(k)
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    def to_chern_monomials(self) -> Dict[Monomial, int]:
        return self.ctx.to_chern_monomials(self)


def chow_mul(x: ChowElem, y: ChowElem) -> ChowElem:
    """Product in canonical normal form."""
    x._check(y)
    ctx = x.ctx
    out: Dict[Key, int] = {}
    truncated = x.truncated or y.truncated
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            prod = ctx.mul_keys(a, b)
            if not prod and ctx.kind == "bgl" and ctx.key_degree(a) + ctx.key_degree(b) > ctx.dim:
                truncated = True
            for k, c in prod.items():
                out[k] = out.get(k, 0) + ca * cb * c
    return ChowElem(ctx, x.modulus, out, truncated)


def mod2_reduce(x: ChowElem) -> ChowElem:
    return ChowElem(x.ctx, 2, dict(x.terms), x.truncated)


def lift_to_integers(x: ChowElem) -> ChowElem:
    """0/1 lift of an F2 element."""
    return ChowElem(x.ctx, 0, {k: c % 2 for k, c in x.terms.items()}, x.truncated)


# ---------------------------------------------------------------------------
# Grassmannians


class GrassContext(ChowContext):
    kind = "gr"

    def __init__(self, k: int, n: int):
        if not (1 <= k < n):
            raise InputError(f"Gr(k, n) needs 1 <= k < n, got k={k}, n={n}")
        self.k = k
        self.n = n
        self.rank = k
        self.width = n - k
        self.dim = k * (n - k)
        self._mul: Dict[Tuple[Partition, Partition], Dict[Partition, int]] = {}
        self._bases = [
            tuple(_box_partitions(k, n - k, d)) for d in range(self.dim + 1)
        ]

    def __repr__(self) -> str:
        return f"Gr({self.k},{self.n})"

    def __reduce__(self):
        return (grassmannian, (self.k, self.n))

    @property
    def label(self) -> str:
        return f"gr:{self.k},{self.n}"

    def basis(self, d: int) -> Tuple[Partition, ...]:
        if 0 <= d <= self.dim:
            return self._bases[d]
        return ()

    def key_degree(self, key: Partition) -> int:
        return sum(key)

    def total_rank(self) -> int:
        return sum(len(b) for b in self._bases)

    def format_key(self, key: Partition) -> str:
        if not key:
            return "1"
        return "s(" + ",".join(map(str, key)) + ")"

    def epoly(self, lam: Partition) -> Dict[Monomial, int]:
        return schur_to_elementary(lam, self.k)

    def mul_keys(self, a: Partition, b: Partition) -> Dict[Partition, int]:
        key = (a, b) if a <= b else (b, a)
        hit = self._mul.get(key)
        if hit is None:
            prod = poly_mul(self.epoly(a), self.epoly(b))
            hit = schur_expand(prod, self.width, self.k)
            self._mul[key] = hit
        return hit

    def cpoly(self, key: Partition) -> Dict[Monomial, int]:
        sign = -1 if sum(key) % 2 else 1
        return {m: sign * c for m, c in self.epoly(key).items()}

    def from_cpoly(self, poly: Mapping[Monomial, int], modulus: int = 0) -> ChowElem:
        out: Dict[Partition, int] = {}
        for mono, c in poly.items():
            if any(mono[self.k:]):
                continue
            mono = tuple(mono[: self.k]) + (0,) * (self.k - len(mono))
            deg = sum((j + 1) * e for j, e in enumerate(mono))
            sign = -1 if deg % 2 else 1
            for lam, a in schur_expand_monomial(mono, self.k, self.width).items():
                out[lam] = out.get(lam, 0) + sign * c * a
        return ChowElem(self, modulus, out)

    def chern_perp(self, i: int, modulus: int = 0) -> ChowElem:
        return complementary_class(self, i, "F2" if modulus == 2 else "Z")

    def to_chern_monomials(self, x: ChowElem) -> Dict[Monomial, int]:
        """Coefficients in the monomial basis c^a with sum(a) <= n - k."""
        rest = dict(x.terms)
        out: Dict[Monomial, int] = {}
        while rest:
            lam = max(rest, key=lambda p: (sum(p), p))
            c = rest[lam]
            exps = elementary_exponents(lam, self.k)
            sign = -1 if sum(lam) % 2 else 1
            out[exps] = _mod(out.get(exps, 0) + sign * c, x.modulus)
            for mu, a in schur_expand_monomial(exps, self.k, self.width).items():
                rest[mu] = _mod(rest.get(mu, 0) - c * a, x.modulus)
            rest = {k: v for k, v in rest.items() if v}
        return {m: c for m, c in out.items() if c}


def _box_partitions(rows: int, width: int, d: int) -> List[Partition]:
    from .symcore import partitions_in_box

    return partitions_in_box(rows, width, d)


@lru_cache(maxsize=None)
def grassmannian(k: int, n: int) -> GrassContext:
    """Chow ring context of Gr(k, n) with Schur bases in degrees 0..k(n-k)."""
    return GrassContext(k, n)


@lru_cache(maxsize=None)
def _complementary(ctx: GrassContext, i: int, modulus: int) -> ChowElem:
    if i == 0:
        return ctx.one(modulus)
    acc = ctx.zero(modulus)
    for j in range(1, min(i, ctx.k) + 1):
        acc = acc + ctx.chern(j, modulus) * _complementary(ctx, i - j, modulus)
    return -acc


def complementary_class(ctx: GrassContext, i: int, ring: str = "Z") -> ChowElem:
    """c^perp_i from c^perp_i = -sum_{j=1..min(i,k)} c_j c^perp_{i-j}."""
    if ring not in ("Z", "F2"):
        raise InputError("ring must be 'Z' or 'F2'")
    if not (0 <= i <= ctx.n - ctx.k):
        raise InputError(f"complementary class index {i} out of range 0..{ctx.n - ctx.k}")
    return _complementary(ctx, i, 2 if ring == "F2" else 0)


def mult_kernel_by(ctx: ChowContext, cls: ChowElem, d: int) -> List[ChowElem]:
    """Basis of {x in Ch^d : cls * x = 0} (F2 coefficients)."""
    if cls.modulus != 2:
        raise InputError("mult_kernel_by works over F2")
    cls_d = cls.degree
    columns = [(cls * b).bits(d + cls_d) for b in ctx.basis_elems(d, 2)]
    return [ctx.from_bits(d, v) for v in f2_kernel(columns, len(columns))]


# ---------------------------------------------------------------------------
# truncated BGL_m


class BGLContext(ChowContext):
    """Z[c_1, ..., c_m] truncated above degree D; basis = Chern monomials."""

    kind = "bgl"

    def __init__(self, m: int, D: int):
        if m < 1 or D < 1:
            raise InputError("BGL context needs m >= 1 and D >= 1")
        self.m = m
        self.rank = m
        self.dim = D
        self.D = D
        self._bases = [tuple(monomials_of_degree(list(range(1, m + 1)), d)) for d in range(D + 1)]

    def __repr__(self) -> str:
        return f"BGL({self.m};D={self.D})"

    def __reduce__(self):
        return (bgl_truncated, (self.m, self.D))

    @property
    def label(self) -> str:
        return f"bgl:{self.m}"

    def basis(self, d: int) -> Tuple[Monomial, ...]:
        if 0 <= d <= self.D:
            return self._bases[d]
        return ()

    def key_degree(self, key: Monomial) -> int:
        return sum((j + 1) * e for j, e in enumerate(key))

    def mul_keys(self, a: Monomial, b: Monomial) -> Dict[Monomial, int]:
        m = tuple(x + y for x, y in zip(a, b))
        if self.key_degree(m) > self.D:
            return {}
        return {m: 1}

    def cpoly(self, key: Monomial) -> Dict[Monomial, int]:
        return {key: 1}

    def from_cpoly(self, poly: Mapping[Monomial, int], modulus: int = 0) -> ChowElem:
        out: Dict[Monomial, int] = {}
        truncated = False
        for mono, c in poly.items():
            if any(mono[self.m:]):
                continue
            mono = tuple(mono[: self.m]) + (0,) * (self.m - len(mono))
            if self.key_degree(mono) > self.D:
                truncated = True
                continue
            out[mono] = out.get(mono, 0) + c
        return ChowElem(self, modulus, out, truncated)

    def format_key(self, key: Monomial) -> str:
        return format_chern_monomial(key)

    def to_chern_monomials(self, x: ChowElem) -> Dict[Monomial, int]:
        return dict(x.terms)

    def restrict(self, x: ChowElem, m_new: int | None = None) -> ChowElem:
        """Restriction to BGL_{m-1}: c_m -> 0."""
        target = bgl_truncated(self.m - 1 if m_new is None else m_new, self.D)
        out = {}
        for mono, c in x.terms.items():
            if any(mono[target.m:]):
                continue
            out[mono[: target.m]] = c
        return ChowElem(target, x.modulus, out)


@lru_cache(maxsize=None)
def bgl_truncated(m: int, D: int) -> BGLContext:
    """Chow ring of BGL_m, Z[c_1..c_m], truncated above degree D."""
    return BGLContext(m, D)


def format_chern_monomial(mono: Monomial, name: str = "c") -> str:
    factors = []
    for j, e in enumerate(mono):
        if e == 1:
            factors.append(f"{name}{j + 1}")
        elif e:
            factors.append(f"{name}{j + 1}^{e}")
    return "*".join(factors) or "1"


# ---------------------------------------------------------------------------
# Whitney formula


@dataclass(frozen=True)
class ChernTensor:
    """Element of CH(BGL_m1) (x) CH(BGL_m2) on pairs of Chern monomials."""

    m1: int
    m2: int
    terms: Mapping[Tuple[Monomial, Monomial], int]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), reverse=True):
            body = f"{format_chern_monomial(a)}⊠{format_chern_monomial(b)}"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)


def _unit(m: int, i: int) -> Monomial:
    return tuple(1 if j == i - 1 else 0 for j in range(m))


def whitney_restrict_chern(m1: int, m2: int, i: int) -> ChernTensor:
    """Image of c_i under BGL_{m1} x BGL_{m2} -> BGL_{m1+m2}: sum_j c_j ⊠ c_{i-j}."""
    if i < 0 or i > m1 + m2:
        raise InputError(f"Chern index {i} out of range for rank {m1 + m2}")
    terms = {}
    for j in range(max(0, i - m2), min(i, m1) + 1):
        a = _unit(m1, j) if j else (0,) * m1
        b = _unit(m2, i - j) if i - j else (0,) * m2
        terms[(a, b)] = 1
    return ChernTensor(m1, m2, terms)


def total_rank(k: int, n: int) -> int:
    return comb(n, k)
