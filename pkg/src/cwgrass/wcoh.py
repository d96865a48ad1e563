"""W-cohomology rings of Gr(k, n) and truncated BGL_n.

Pontryagin generators are indexed so that p_j sits in degree 2j: the even
classes p_2, p_4, ... live in degrees 4, 8, ....  Normal forms are computed
degreewise by integral row reduction of the relation module; quotient
Pontryagin classes p^perp are always eliminated first, then squares of Euler
classes, products e * e^perp and R^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, Sequence, Tuple

from .chow import BGLContext, GrassContext
from .symcore import (
    Generator,
    Monomial,
    group_type,
    FGAbelian,
    hermite_normal_form,
    left_kernel,
    monomials_of_degree,
    poly_mul,
    lattice_equal,
)

__all__ = [
    "InternalInconsistency",
    "WRing",
    "WElem",
    "w_ring",
    "w_mul",
    "w_basis",
    "poincare_series",
    "euler_mult_check",
    "EulerMultReport",
    "w_restrict",
]


class InternalInconsistency(RuntimeError):
    """A presentation produced a result that contradicts its own invariants."""


def _pname(j: int, quot: bool = False) -> str:
    return f"p{j}q" if quot else f"p{j}"


class WRing:
    """A graded-commutative W-algebra given by generators and relations."""

    def __init__(
        self,
        label: str,
        gens: Sequence[Generator],
        relations: Sequence[Mapping[Monomial, int]],
        strict_dim: int | None = None,
        truncate: int | None = None,
        roles: Mapping[str, str] | None = None,
    ):
        self.label = label
        self.gens = tuple(gens)
        self.names = tuple(g.name for g in self.gens)
        self.relations = [dict(r) for r in relations]
        self.strict_dim = strict_dim
        self.truncate = truncate
        self.roles = dict(roles or {})
        self._tables: Dict[Tuple[int, int], "_NFTable"] = {}
        self._degrees = [g.degree for g in self.gens]
        self._rel_bideg = [self.bidegree(next(iter(r))) for r in self.relations if r]

    def __repr__(self) -> str:
        return f"WRing({self.label})"

    @property
    def dim(self) -> int | None:
        return self.strict_dim if self.strict_dim is not None else self.truncate

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def has(self, name: str) -> bool:
        return name in self.names

    def bidegree(self, mono: Monomial) -> Tuple[int, int]:
        d = sum(e * g.degree for e, g in zip(mono, self.gens))
        t = sum(e * g.twist for e, g in zip(mono, self.gens)) % 2
        return d, t

    def gen_mono(self, name: str) -> Monomial:
        i = self.index_of(name)
        return tuple(1 if j == i else 0 for j in range(len(self.gens)))

    def one_mono(self) -> Monomial:
        return (0,) * len(self.gens)

    def monomials(self, d: int, t: int) -> List[Monomial]:
        if not self.gens:
            return [()] if d == 0 and t == 0 else []
        return [m for m in monomials_of_degree(self._degrees, d) if self.bidegree(m)[1] == t]

    # -- normal forms ----------------------------------------------------

    def table(self, d: int, t: int) -> "_NFTable":
        key = (d, t % 2)
        tab = self._tables.get(key)
        if tab is None:
            tab = self._build(d, t % 2)
            self._tables[key] = tab
        return tab

    def _priority(self, m: Monomial) -> tuple:
        flags = []
        quot = [i for i, n in enumerate(self.names) if n.endswith("q") and n.startswith("p")]
        flags.append(0 if any(m[i] for i in quot) else 1)
        for name in ("e", "eq", "R"):
            if self.has(name):
                flags.append(0 if m[self.index_of(name)] >= 2 else 1)
        if self.has("e") and self.has("eq"):
            flags.append(0 if m[self.index_of("e")] and m[self.index_of("eq")] else 1)
        return tuple(flags) + (-sum(m),) + tuple(-x for x in m)

    def _build(self, d: int, t: int) -> "_NFTable":
        monos = self.monomials(d, t)
        if self.truncate is not None and d > self.truncate:
            return _NFTable(d, t, (), {m: {} for m in monos}, truncated=True)
        rows: List[Dict[Monomial, int]] = []
        for rel, (dr, tr) in zip(self.relations, self._rel_bideg):
            for m in self.monomials(d - dr, (t - tr) % 2):
                rows.append({tuple(a + b for a, b in zip(m, rm)): c for rm, c in rel.items()})
        order = sorted(monos, key=self._priority)
        col = {m: j for j, m in enumerate(order)}
        mat = [[0] * len(order) for _ in rows]
        for i, r in enumerate(rows):
            for m, c in r.items():
                mat[i][col[m]] += c
        H = hermite_normal_form(mat, len(order)) if mat else []
        pivots = {}
        for row in H:
            p = next(j for j, a in enumerate(row) if a)
            if row[p] != 1:
                raise InternalInconsistency(
                    f"{self.label}: non-unimodular pivot {row[p]} in degree ({d},{t})"
                )
            pivots[p] = row
        standard = tuple(sorted((order[j] for j in range(len(order)) if j not in pivots), reverse=True))
        rewrite: Dict[Monomial, Dict[Monomial, int]] = {m: {m: 1} for m in standard}
        for p, row in pivots.items():
            rewrite[order[p]] = {order[j]: -a for j, a in enumerate(row) if a and j != p}
        if self.strict_dim is not None and d > self.strict_dim and standard:
            raise InternalInconsistency(
                f"{self.label}: nonzero normal forms in degree {d} > dim {self.strict_dim}"
            )
        return _NFTable(d, t, standard, rewrite)

    def normal_form(self, terms: Mapping[Monomial, int], modulus: int = 0) -> Tuple[Dict[Monomial, int], bool]:
        out: Dict[Monomial, int] = {}
        truncated = False
        for m, c in terms.items():
            if not c:
                continue
            tab = self.table(*self.bidegree(m))
            truncated = truncated or tab.truncated
            for s, a in tab.rewrite[m].items():
                out[s] = out.get(s, 0) + a * c
        if modulus:
            out = {m: c % modulus for m, c in out.items()}
        return {m: c for m, c in out.items() if c}, truncated

    def basis(self, d: int, t: int) -> Tuple[Monomial, ...]:
        if d < 0:
            return ()
        return self.table(d, t).standard

    def format_mono(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"

    def elem(self, terms: Mapping[Monomial, int], modulus: int = 0) -> "WElem":
        nf, trunc = self.normal_form(terms, modulus)
        return WElem(self, nf, modulus, trunc)

    def gen(self, name: str, modulus: int = 0) -> "WElem":
        return self.elem({self.gen_mono(name): 1}, modulus)

    def one(self, modulus: int = 0) -> "WElem":
        return self.elem({self.one_mono(): 1}, modulus)

    def zero(self, modulus: int = 0) -> "WElem":
        return WElem(self, {}, modulus)


@dataclass(frozen=True)
class _NFTable:
    degree: int
    twist: int
    standard: Tuple[Monomial, ...]
    rewrite: Mapping[Monomial, Mapping[Monomial, int]]
    truncated: bool = False


@dataclass(frozen=True, eq=False)
class WElem:
    """W-linear combination of normal-form monomials."""

    ring: WRing
    terms: Mapping[Monomial, int] = field(default_factory=dict)
    modulus: int = 0
    truncated: bool = False

    def __post_init__(self):
        t = {m: (c % self.modulus if self.modulus else c) for m, c in self.terms.items()}
        object.__setattr__(self, "terms", {m: c for m, c in t.items() if c})

    def is_zero(self) -> bool:
        return not self.terms

    def bidegrees(self) -> List[Tuple[int, int]]:
        return sorted({self.ring.bidegree(m) for m in self.terms})

    def _check(self, other: "WElem") -> None:
        if self.ring is not other.ring or self.modulus != other.modulus:
            raise ValueError("W-elements from different rings")

    def __add__(self, other: "WElem") -> "WElem":
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return WElem(self.ring, t, self.modulus, self.truncated or other.truncated)

    def __neg__(self) -> "WElem":
        return WElem(self.ring, {m: -c for m, c in self.terms.items()}, self.modulus, self.truncated)

    def __sub__(self, other: "WElem") -> "WElem":
        return self + (-other)

    def scale(self, a: int) -> "WElem":
        return WElem(self.ring, {m: a * c for m, c in self.terms.items()}, self.modulus, self.truncated)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return w_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WElem):
            return NotImplemented
        return self.ring is other.ring and self.modulus == other.modulus and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((id(self.ring), self.modulus, tuple(sorted(self.terms.items()))))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (self.ring.bidegree(m), m), reverse=True):
            c = self.terms[m]
            body = self.ring.format_mono(m)
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"WElem({self})"


def w_mul(x: WElem, y: WElem) -> WElem:
    """Product reduced to normal form."""
    x._check(y)
    raw = poly_mul(x.terms, y.terms)
    nf, trunc = x.ring.normal_form(raw, x.modulus)
    return WElem(x.ring, nf, x.modulus, trunc or x.truncated or y.truncated)


# ---------------------------------------------------------------------------
# presentations


def _pontryagin_whitney_relations(n_gens: int, sub: List[int], quot: List[int]) -> List[Dict[Monomial, int]]:
    """Positive-degree components of p * p^perp = 1."""
    A, B = len(sub), len(quot)
    rels = []
    for j in range(1, A + B + 1):
        rel: Dict[Monomial, int] = {}
        for a in range(0, A + 1):
            b = j - a
            if b < 0 or b > B:
                continue
            mono = [0] * n_gens
            if a:
                mono[sub[a - 1]] += 1
            if b:
                mono[quot[b - 1]] += 1
            rel[tuple(mono)] = rel.get(tuple(mono), 0) + 1
        rels.append(rel)
    return rels


def build_presentation(
    label: str,
    n_sub: int,
    n_quot: int,
    e_deg: int | None,
    eq_deg: int | None,
    r_deg: int | None,
    strict_dim: int | None = None,
) -> WRing:
    """W[p_2..p_{2A}, e, p^perp_2..p^perp_{2B}, e^perp] / (p p^perp = 1, e e^perp, e^2 = p_top, ...) (x) Lambda[R]."""
    gens: List[Generator] = []
    sub, quot = [], []
    for i in range(1, n_sub + 1):
        sub.append(len(gens))
        gens.append(Generator(_pname(2 * i), 4 * i, 0))
    if e_deg is not None:
        gens.append(Generator("e", e_deg, 1))
    for i in range(1, n_quot + 1):
        quot.append(len(gens))
        gens.append(Generator(_pname(2 * i, True), 4 * i, 0))
    if eq_deg is not None:
        gens.append(Generator("eq", eq_deg, 1))
    if r_deg is not None:
        gens.append(Generator("R", r_deg, 0))
    ng = len(gens)
    names = [g.name for g in gens]

    def mono(**exps):
        m = [0] * ng
        for name, e in exps.items():
            m[names.index(name)] += e
        return tuple(m)

    rels = _pontryagin_whitney_relations(ng, sub, quot)
    if e_deg is not None and eq_deg is not None:
        rels.append({mono(e=1, eq=1): 1})
    if e_deg is not None:
        # e^2 = p_top for an even-rank bundle; p_top is 1 when there is no Pontryagin generator
        top = {mono(**{names[sub[-1]]: 1}): -1} if sub else {mono(): -1}
        rels.append({mono(e=2): 1, **top})
    if eq_deg is not None:
        top = {mono(**{names[quot[-1]]: 1}): -1} if quot else {mono(): -1}
        rels.append({mono(eq=2): 1, **top})
    if r_deg is not None:
        rels.append({mono(R=2): 1})
    return WRing(label, gens, rels, strict_dim=strict_dim)


def _grass_presentation(k: int, n: int) -> WRing:
    A, B = k // 2, (n - k) // 2
    e_deg = k if k % 2 == 0 else None
    eq_deg = n - k if (n - k) % 2 == 0 else None
    r_deg = n - 1 if k % 2 == 1 and (n - k) % 2 == 1 else None
    ring = build_presentation(f"W(Gr({k},{n}))", A, B, e_deg, eq_deg, r_deg, strict_dim=k * (n - k))
    ring.space = ("gr", k, n)
    return ring


def _bgl_presentation(n: int, D: int) -> WRing:
    gens = [Generator(_pname(2 * i), 4 * i, 0) for i in range(1, (n - 1) // 2 + 1)]
    if n % 2 == 0:
        gens.append(Generator("e", n, 1))
    ring = WRing(f"W(BGL_{n};D={D})", gens, [], truncate=D)
    ring.space = ("bgl", n, D)
    return ring


@lru_cache(maxsize=None)
def _w_ring_cached(kind: str, a: int, b: int) -> WRing:
    if kind == "gr":
        return _grass_presentation(a, b)
    return _bgl_presentation(a, b)


def w_ring(space) -> WRing:
    """Presentation for a Grassmannian or truncated BGL context."""
    if isinstance(space, GrassContext):
        return _w_ring_cached("gr", space.k, space.n)
    if isinstance(space, BGLContext):
        return _w_ring_cached("bgl", space.m, space.D)
    if isinstance(space, WRing):
        return space
    raise TypeError(f"unsupported space {space!r}")


def w_basis(space, d: int, twist: int) -> List[Monomial]:
    ring = w_ring(space)
    if ring.dim is not None and d > ring.dim:
        return []
    return list(ring.basis(d, twist))


def poincare_series(space, twist: int) -> List[int]:
    ring = w_ring(space)
    return [len(ring.basis(d, twist)) for d in range(ring.dim + 1)]


def w_restrict(x: WElem) -> WElem:
    """BGL_n -> BGL_{n-1}: p_i -> p_i, top p_{n-1} -> e_{n-1}^2 (n odd), e_n -> 0 (n even)."""
    kind, n, D = x.ring.space
    if kind != "bgl" or n < 2:
        raise ValueError("restriction is defined for BGL_n with n >= 2")
    target = _w_ring_cached("bgl", n - 1, D)
    out: Dict[Monomial, int] = {}
    for m, c in x.terms.items():
        new = [0] * len(target.gens)
        zero = False
        for name, e in zip(x.ring.names, m):
            if not e:
                continue
            if name == "e":
                zero = True
                break
            j = int(name[1:])
            if target.has(name):
                new[target.index_of(name)] += e
            elif j == n - 1:
                new[target.index_of("e")] += 2 * e
            else:
                raise InternalInconsistency(f"generator {name} has no restriction")
        if not zero:
            out[tuple(new)] = out.get(tuple(new), 0) + c
    return target.elem(out, x.modulus)


# ---------------------------------------------------------------------------
# Euler multiplication


@dataclass
class EulerMultReport:
    space: str
    which: str
    case: int
    rows: List[dict]
    passed: bool

    def as_dict(self) -> dict:
        return {
            "space": self.space,
            "which": self.which,
            "case": self.case,
            "passed": self.passed,
            "rows": self.rows,
        }


def _mult_matrix(ring: WRing, u: WElem, d: int, t: int) -> Tuple[List[List[int]], Tuple[Monomial, ...]]:
    du, tu = u.bidegrees()[0] if u.terms else (0, 0)
    src = ring.basis(d, t)
    tgt = ring.basis(d + du, (t + tu) % 2)
    idx = {m: j for j, m in enumerate(tgt)}
    rows = []
    for m in src:
        prod = w_mul(ring.elem({m: 1}), u)
        row = [0] * len(tgt)
        for s, c in prod.terms.items():
            row[idx[s]] = c
        rows.append(row)
    return rows, tgt


def _ideal_span(ring: WRing, g: WElem, d: int, t: int) -> List[List[int]]:
    if g.is_zero():
        return []
    dg, tg = g.bidegrees()[0]
    tgt = ring.basis(d, t)
    idx = {m: j for j, m in enumerate(tgt)}
    rows = []
    for m in ring.basis(d - dg, (t - tg) % 2):
        prod = w_mul(ring.elem({m: 1}), g)
        row = [0] * len(tgt)
        for s, c in prod.terms.items():
            row[idx[s]] = c
        rows.append(row)
    return rows


def euler_mult_check(space: GrassContext, which: str = "e^⊥") -> EulerMultReport:
    """Kernel and cokernel of multiplication by an Euler class versus their ideal descriptions."""
    if not isinstance(space, GrassContext):
        raise TypeError("euler_mult_check needs a Grassmannian")
    if which in ("eq", "e^perp", "e^⊥", "eperp"):
        which = "e^⊥"
        a, b = space.k, space.n - space.k  # a = rank of the "other" bundle
        own, other = "eq", "e"
    elif which in ("e", "e_k"):
        which = "e_k"
        a, b = space.n - space.k, space.k
        own, other = "e", "eq"
    else:
        raise ValueError("which must be 'e_k' or 'e^⊥'")
    ring = w_ring(space)
    A, B = space.k // 2, (space.n - space.k) // 2
    if b % 2 == 1:
        case = 4
        u = ring.zero()
        ideal = None
        aux = ring
    elif a % 2 == 0:
        case = 2
        u = ring.gen(own)
        ideal = ring.gen(other)
        if own == "eq":
            aux = build_presentation("coker", A, B - 1, space.k, None, None)
        else:
            aux = build_presentation("coker", A - 1, B, None, space.n - space.k, None)
    else:
        case = 3
        u = ring.gen(own)
        # p_{a-1} of the other bundle times the Euler class
        if a - 1 > 0:
            pname = f"p{a - 1}" if own == "eq" else f"p{a - 1}q"
            ideal = w_mul(ring.gen(pname), u)
        else:
            ideal = u
        if own == "eq":
            aux = build_presentation("coker", A, B - 1, None, None, None)
        else:
            aux = build_presentation("coker", A - 1, B, None, None, None)
    rows = []
    passed = True
    du = space.n - space.k if own == "eq" else space.k
    for t in (0, 1):
        for d in range(space.dim + 1):
            src = ring.basis(d, t)
            if case == 4:
                rows.append({"degree": d, "twist": t, "kernel_ok": True, "coker_ok": True})
                continue
            M, tgt = _mult_matrix(ring, u, d, t)
            ker = left_kernel(M) if src else []
            ideal_rows = _ideal_span(ring, ideal, d, t)
            ker_ok = lattice_equal(ker, ideal_rows, len(src))
            # cokernel in the target degree
            td, tt = d + du, (t + 1) % 2
            tgt_basis = ring.basis(td, tt)
            G = FGAbelian(len(tgt_basis), tuple(tuple(r) for r in M if any(r)))
            gt = group_type(G)
            expected = len(aux.basis(td, tt)) if td >= 0 else 0
            coker_ok = gt.torsion_invariants == () and gt.free_rank == expected
            passed = passed and ker_ok and coker_ok
            rows.append(
                {
                    "degree": d,
                    "twist": t,
                    "kernel_rank": len(ker),
                    "kernel_ok": ker_ok,
                    "coker_degree": td,
                    "coker_rank": gt.free_rank,
                    "coker_expected": expected,
                    "coker_ok": coker_ok,
                }
            )
    # low target degrees not reached by the map are all cokernel
    if case != 4:
        for tt in (0, 1):
            for td in range(0, min(du, space.dim + 1)):
                got = len(ring.basis(td, tt))
                exp = len(aux.basis(td, tt))
                ok = got == exp
                passed = passed and ok
                rows.append({"coker_degree": td, "twist": tt, "coker_rank": got, "coker_expected": exp, "coker_ok": ok})
    return EulerMultReport(space.label, which, case, rows, passed)

