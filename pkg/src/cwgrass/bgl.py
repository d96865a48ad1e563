"""The candidate presentation R_n / I_n for the I-cohomology of BGL_n.

R_n is the graded-commutative W-algebra on P_i (degree (4i,0)), X_n
(degree (n,1)), B_J (degree (1+2|J|_sum, 0)) and T_J (same degree, twist 1),
with B_empty = 0.  The map theta_n sends it into a concrete model of the
I-cohomology of BGL_n truncated at degree D: the free part is the W-ring
W[p_2, ..., e_n], torsion is represented by its image in Ch(BGL_n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .chow import BGLContext, ChowElem, bgl_truncated, format_chern_monomial
from .icoh import IElem, ISpace, PresentationIncompleteError, i_basis, i_mul, i_space, rho
from .steenrod import in_sq2_image, sq2
from .symcore import FGAbelian, InputError, group_type, monomials_of_degree
from .wcoh import InternalInconsistency, w_restrict

__all__ = [
    "Gen",
    "RPoly",
    "BGLPresentation",
    "BGLElem",
    "bgl_presentation",
    "bgl_space",
    "bgl_mul",
    "theta",
    "phi",
    "phi_restrict",
    "relations",
    "Relation",
    "check_ideal_preserved",
    "check_type3_mod2",
    "check_even_rank_identity",
    "check_odd_cokernel",
    "IdealReport",
    "pontryagin_to_chow",
    "pontryagin_whitney",
    "PontryaginTensor",
    "index_sets",
]

BGLElem = IElem

# A generator is ("P", i), ("X",), ("B", J) or ("T", J) with J a sorted tuple.
Gen = Tuple
AMono = Tuple[Gen, ...]  # sorted tuple of generators with repetition


def index_sets(m: int) -> List[Tuple[int, ...]]:
    """All subsets of {1..m} in size-then-lex order, empty set first."""
    out: List[Tuple[int, ...]] = []
    for r in range(m + 1):
        out.extend(combinations(range(1, m + 1), r))
    return out


def _gen_key(g: Gen):
    order = {"P": 0, "X": 1, "B": 2, "T": 3}
    return (order[g[0]],) + tuple(g[1:])


def gen_bidegree(n: int, g: Gen) -> Tuple[int, int]:
    kind = g[0]
    if kind == "P":
        return 4 * g[1], 0
    if kind == "X":
        return n, 1
    d = 1 + 2 * sum(g[1])
    return d, 0 if kind == "B" else 1


def format_gen(g: Gen) -> str:
    kind = g[0]
    if kind == "P":
        return f"P{g[1]}"
    if kind == "X":
        return "X"
    return f"{kind}{{{','.join(map(str, g[1]))}}}"


@dataclass(frozen=True, eq=False)
class RPoly:
    """Element of R_n: W-combination of monomials in the abstract generators."""

    n: int
    terms: Mapping[AMono, int] = field(default_factory=dict)

    def __post_init__(self):
        clean: Dict[AMono, int] = {}
        for m, c in self.terms.items():
            if any(g[0] == "B" and not g[1] for g in m):
                continue  # B_empty = 0
            m = tuple(sorted(m, key=_gen_key))
            clean[m] = clean.get(m, 0) + c
        object.__setattr__(self, "terms", {m: c for m, c in clean.items() if c})

    @staticmethod
    def gen(n: int, g: Gen) -> "RPoly":
        return RPoly(n, {(g,): 1})

    @staticmethod
    def one(n: int) -> "RPoly":
        return RPoly(n, {(): 1})

    def __add__(self, other: "RPoly") -> "RPoly":
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return RPoly(self.n, t)

    def __neg__(self) -> "RPoly":
        return RPoly(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "RPoly") -> "RPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return RPoly(self.n, {m: other * c for m, c in self.terms.items()})
        out: Dict[AMono, int] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                m = a + b
                out[m] = out.get(m, 0) + ca * cb
        return RPoly(self.n, out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RPoly):
            return NotImplemented
        return self.n == other.n and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def bidegrees(self) -> List[Tuple[int, int]]:
        out = set()
        for m in self.terms:
            d = sum(gen_bidegree(self.n, g)[0] for g in m)
            t = sum(gen_bidegree(self.n, g)[1] for g in m) % 2
            out.add((d, t))
        return sorted(out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda kv: [_gen_key(g) for g in kv[0]]):
            body = "*".join(format_gen(g) for g in m) or "1"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)


def P_A(n: int, A: Iterable[int]) -> RPoly:
    out = RPoly.one(n)
    for a in A:
        out = out * RPoly.gen(n, ("P", a))
    return out


def _B(n: int, J) -> RPoly:
    return RPoly.gen(n, ("B", tuple(sorted(J))))


def _T(n: int, J) -> RPoly:
    return RPoly.gen(n, ("T", tuple(sorted(J))))


def _delta(a, b) -> Tuple[int, ...]:
    return tuple(sorted(set(a) ^ set(b)))


@dataclass(frozen=True)
class BGLPresentation:
    n: int
    generators: Tuple[Gen, ...]

    @property
    def max_index(self) -> int:
        return (self.n - 1) // 2

    def bidegree(self, g: Gen) -> Tuple[int, int]:
        return gen_bidegree(self.n, g)


@lru_cache(maxsize=None)
def bgl_presentation(n: int) -> BGLPresentation:
    if n < 1:
        raise InputError("BGL_n needs n >= 1")
    m = (n - 1) // 2
    gens: List[Gen] = [("P", i) for i in range(1, m + 1)]
    gens.append(("X",))
    for J in index_sets(m):
        if J:
            gens.append(("B", J))
        gens.append(("T", J))
    return BGLPresentation(n, tuple(gens))


# ---------------------------------------------------------------------------
# the model and theta


def bgl_space(n: int, D: int, model: str = "real") -> ISpace:
    """I-cohomology model of BGL_n truncated above degree D."""
    return i_space(bgl_truncated(n, D), model)


def bgl_mul(x: IElem, y: IElem) -> IElem:
    """Product in the BGL model: free part in W[p, e], torsion through rho."""
    if not isinstance(x.space.ctx, BGLContext):
        raise InputError("bgl_mul expects BGL elements")
    return i_mul(x, y)


def _cbar_product(ctx: BGLContext, J: Sequence[int]) -> ChowElem:
    x = ctx.one(2)
    for j in J:
        x = x * ctx.chern(2 * j, 2)
    return x


def _theta_gen(sp: ISpace, g: Gen) -> IElem:
    ctx = sp.ctx
    n = ctx.m
    kind = g[0]
    if kind == "P":
        return sp.generator(f"p{2 * g[1]}")
    if kind == "X":
        if n % 2 == 0:
            return sp.generator("e")
        # odd rank: e_n = tau_{(n-1)/2}, reducing to c_n
        return sp.elem(n, 1, tors=ctx.chern(n, 2))
    x = _cbar_product(ctx, g[1])
    twist = 0 if kind == "B" else 1
    d = 1 + 2 * sum(g[1])
    return sp.elem(d, twist, tors=sq2(ctx, twist, x))


def theta(sp: ISpace, r: RPoly, bidegree: Tuple[int, int] | None = None) -> IElem:
    """Image of a homogeneous element of R_n in the BGL_n model."""
    bds = r.bidegrees()
    if len(bds) > 1:
        raise InputError("theta expects a homogeneous element")
    d, t = bds[0] if bds else (bidegree or (0, 0))
    out = sp.zero(d, t)
    for m, c in r.terms.items():
        term = sp.one()
        for g in m:
            term = i_mul(term, _theta_gen(sp, g))
        out = out + term.scale(c)
    return out


def phi(r: RPoly) -> RPoly:
    """Phi_n: R_n -> R_{n-1} on generators, extended multiplicatively."""
    n = r.n
    if n < 2:
        raise InputError("Phi_n needs n >= 2")
    top = (n - 1) / 2
    X = RPoly.gen(n - 1, ("X",))

    def image(g: Gen) -> RPoly:
        kind = g[0]
        if kind == "P":
            return X * X if g[1] == top else RPoly.gen(n - 1, g)
        if kind == "X":
            return RPoly(n - 1, {})
        J = g[1]
        if J and J[-1] == top:
            rest = J[:-1]
            other = "T" if kind == "B" else "B"
            return RPoly.gen(n - 1, (other, rest)) * X
        return RPoly.gen(n - 1, g)

    out = RPoly(n - 1, {})
    for m, c in r.terms.items():
        term = RPoly.one(n - 1)
        for g in m:
            term = term * image(g)
        out = out + term * c
    return out


def phi_restrict(x: IElem) -> IElem:
    """Restriction of a model element from BGL_n to BGL_{n-1} (c_n -> 0, top p -> e^2, e_n -> 0)."""
    ctx = x.space.ctx
    if not isinstance(ctx, BGLContext) or ctx.m < 2:
        raise InputError("phi_restrict needs a BGL_n element with n >= 2")
    target = bgl_space(ctx.m - 1, ctx.D, x.space.model.name)
    free = w_restrict(x.free)
    red = ctx.restrict(rho(x))
    defect = red - target.rho_free(free)
    if not defect.is_zero() and not in_sq2_image(target.ctx, x.twist, defect, x.degree):
        raise PresentationIncompleteError(f"restriction of {x} leaves the Bockstein image")
    return target.elem(x.degree, x.twist, free, defect)


# ---------------------------------------------------------------------------
# relations


@dataclass(frozen=True)
class Relation:
    kind: str  # "1", "2", "3.1" ... "3.4"
    label: str
    poly: RPoly
    bidegree: Tuple[int, int]


def _rel(kind: str, label: str, lhs: RPoly, rhs: RPoly, n: int) -> Relation:
    poly = lhs - rhs
    bds = sorted(set(lhs.bidegrees()) | set(rhs.bidegrees()))
    if len(bds) > 1:
        raise InternalInconsistency(f"inhomogeneous relation {label}: {bds}")
    return Relation(kind, label, poly, bds[0] if bds else (0, 0))


def _fmt_set(J) -> str:
    return "{" + ",".join(map(str, J)) + "}"


def relations(n: int, max_degree: int | None = None) -> List[Relation]:
    """Generating relations of I_n of types 1-3 (bidegree <= max_degree when given)."""
    m = (n - 1) // 2
    sets = index_sets(m)
    rels: List[Relation] = []
    for J in sets:
        if J:
            rels.append(_rel("1", f"2*B{_fmt_set(J)}", _B(n, J) * 2, RPoly(n, {}), n))
        rels.append(_rel("1", f"2*T{_fmt_set(J)}", _T(n, J) * 2, RPoly(n, {}), n))
    if n % 2 == 1:
        top = (n - 1) // 2
        Jt = (top,) if top else ()
        rels.append(_rel("2", f"X=T{_fmt_set(Jt)}", RPoly.gen(n, ("X",)), _T(n, Jt), n))
    for J in sets:
        for Jp in sets:
            bb = RPoly(n, {})
            bt = RPoly(n, {})
            for k in J:
                rest = tuple(j for j in J if j != k)
                common = set(rest) & set(Jp)
                bb = bb + _B(n, (k,)) * P_A(n, common) * _B(n, _delta(rest, Jp))
                bt = bt + _B(n, (k,)) * P_A(n, common) * _T(n, _delta(rest, Jp))
            lab = f"{_fmt_set(J)},{_fmt_set(Jp)}"
            T0 = _T(n, ())
            PJ = P_A(n, set(J) & set(Jp))
            rels.append(_rel("3.1", "BB" + lab, _B(n, J) * _B(n, Jp), bb, n))
            rels.append(_rel("3.2", "BT" + lab, _B(n, J) * _T(n, Jp), bt, n))
            rels.append(
                _rel("3.3", "TB" + lab, _T(n, J) * _B(n, Jp), _B(n, J) * _T(n, Jp) + T0 * PJ * _B(n, _delta(J, Jp)), n)
            )
            rels.append(
                _rel("3.4", "TT" + lab, _T(n, J) * _T(n, Jp), _B(n, J) * _B(n, Jp) + T0 * PJ * _T(n, _delta(J, Jp)), n)
            )
    if max_degree is not None:
        rels = [r for r in rels if r.bidegree[0] <= max_degree]
    return rels


@dataclass
class IdealReport:
    check: str
    n: int
    max_degree: int
    passed: bool
    checked: int
    failures: List[str]

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "n": self.n,
            "max_degree": self.max_degree,
            "passed": self.passed,
            "checked": self.checked,
            "failures": list(self.failures),
        }


def check_ideal_preserved(n: int, max_degree: int = 10, model: str = "real") -> IdealReport:
    """Phi_n(r) vanishes in the BGL_{n-1} model for every generating relation r of degree <= max_degree."""
    if n < 2:
        raise InputError("check_ideal_preserved needs n >= 2")
    src = bgl_space(n, max_degree, model)
    tgt = bgl_space(n - 1, max_degree, model)
    failures = []
    rels = relations(n, max_degree)
    for rel in rels:
        if not theta(src, rel.poly, rel.bidegree).is_zero():
            failures.append(f"relation {rel.label} does not hold in the BGL_{n} model")
        img = phi(rel.poly)
        if not theta(tgt, img, rel.bidegree).is_zero():
            failures.append(f"Phi_{n}({rel.label}) = {img} is nonzero in BGL_{n - 1}")
    return IdealReport("ideal_preserved", n, max_degree, not failures, len(rels), failures)


def check_type3_mod2(n: int, max_degree: int = 12) -> IdealReport:
    """rho(theta_n(r)) = 0 in Ch(BGL_n) for every type-3 relation r."""
    ctx = bgl_truncated(n, max_degree)
    sp = bgl_space(n, max_degree)
    failures = []
    rels = [r for r in relations(n, max_degree) if r.kind.startswith("3")]
    for rel in rels:
        total = ctx.zero(2)
        for m, c in rel.poly.terms.items():
            if c % 2 == 0:
                continue
            term = ctx.one(2)
            for g in m:
                term = term * rho(_theta_gen(sp, g))
            total = total + term
        if not total.is_zero():
            failures.append(f"{rel.label}: rho = {total}")
    return IdealReport("type3_mod2", n, max_degree, not failures, len(rels), failures)


def _monomials(pres: BGLPresentation, d: int, t: int) -> List[AMono]:
    gens = pres.generators
    degs = [pres.bidegree(g)[0] for g in gens]
    out = []
    for exps in monomials_of_degree(degs, d):
        if sum(e * pres.bidegree(g)[1] for e, g in zip(exps, gens)) % 2 != t:
            continue
        if any(e and g[0] == "B" and not g[1] for e, g in zip(exps, gens)):
            continue
        mono = tuple(g for e, g in zip(exps, gens) for _ in range(e))
        out.append(mono)
    return out


def _ranks(sp: ISpace, d: int, t: int) -> Tuple[int, int]:
    basis = i_basis(sp, d, t)
    free = sum(1 for b in basis if not b.is_torsion())
    return free, len(basis) - free


def _coords(sp: ISpace, x: IElem, d: int, t: int) -> List[int]:
    """Coordinates in the group Z^f + (Z/2)^s of the model at (d, t)."""
    from .steenrod import sq2_image_rref
    from .symcore import f2_coordinates

    fb = sp.wring.basis(d, t)
    vec = [x.free.terms.get(m, 0) for m in fb]
    rref = sq2_image_rref(sp.ctx, t, d)
    if rref:
        bits = f2_coordinates(x.tors.bits(d), rref) if not x.tors.is_zero() else 0
        if bits is None:
            raise InternalInconsistency("torsion part outside the Bockstein image")
        vec += [(bits >> j) & 1 for j in range(len(rref))]
    return vec


def _span_is_everything(sp: ISpace, elems: List[IElem], d: int, t: int) -> bool:
    f, s = _ranks(sp, d, t)
    if f + s == 0:
        return True
    rels = [tuple(_coords(sp, x, d, t)) for x in elems]
    rels += [tuple(2 if j == f + i else 0 for j in range(f + s)) for i in range(s)]
    gt = group_type(FGAbelian(f + s, tuple(r for r in rels if any(r))))
    return gt.free_rank == 0 and not gt.torsion_invariants


def check_even_rank_identity(n: int, max_degree: int = 10) -> IdealReport:
    """n even: ranks of BGL_n equal those of BGL_{n-1}[X_n] and Phi_n is onto, degreewise."""
    if n % 2 or n < 2:
        raise InputError("the polynomial identity is stated for even n")
    src = bgl_space(n, max_degree)
    tgt = bgl_space(n - 1, max_degree)
    pres = bgl_presentation(n)
    failures = []
    for t in (0, 1):
        for d in range(max_degree + 1):
            got = _ranks(src, d, t)
            exp = [0, 0]
            for j in range(d // n + 1):
                a, b = _ranks(tgt, d - j * n, (t - j) % 2)
                exp[0] += a
                exp[1] += b
            if got != tuple(exp):
                failures.append(f"ranks at ({d},{t}): {got} != {tuple(exp)}")
            images = [theta(tgt, phi(RPoly(n, {m: 1})), (d, t)) for m in _monomials(pres, d, t)]
            if not _span_is_everything(tgt, images, d, t):
                failures.append(f"Phi_{n} not onto in degree ({d},{t})")
    return IdealReport("even_rank_identity", n, max_degree, not failures, 2 * (max_degree + 1), failures)


def check_odd_cokernel(n: int, max_degree: int = 10) -> IdealReport:
    """n odd: BGL_{n-1} modulo the ideal generated by Phi_n(R_n^+) is W[X_{n-1}]/(X_{n-1}^2)."""
    if n % 2 == 0 or n < 3:
        raise InputError("the cokernel statement is for odd n >= 3")
    tgt = bgl_space(n - 1, max_degree)
    pres = bgl_presentation(n)
    gens = []
    for g in pres.generators:
        d, t = pres.bidegree(g)
        if g[0] == "B" and not g[1]:
            continue
        if d <= max_degree:
            gens.append((d, t, theta(tgt, phi(RPoly.gen(n, g)), (d, t))))
    failures = []
    for t in (0, 1):
        for d in range(max_degree + 1):
            elems = []
            for dg, tg, img in gens:
                if img.is_zero() or dg > d:
                    continue
                for b in i_basis(tgt, d - dg, (t - tg) % 2):
                    elems.append(i_mul(b, img))
            f, s = _ranks(tgt, d, t)
            rels = [tuple(_coords(tgt, x, d, t)) for x in elems]
            rels += [tuple(2 if j == f + i else 0 for j in range(f + s)) for i in range(s)]
            gt = group_type(FGAbelian(f + s, tuple(r for r in rels if any(r))))
            expected = 1 if (d, t) in ((0, 0), (n - 1, 1)) else 0
            if gt.free_rank != expected or gt.torsion_invariants:
                failures.append(f"cokernel at ({d},{t}) is {gt}, expected rank {expected}")
    return IdealReport("odd_cokernel", n, max_degree, not failures, 2 * (max_degree + 1), failures)


# ---------------------------------------------------------------------------
# Pontryagin classes


def pontryagin_to_chow(m: int, i: int, D: int) -> ChowElem:
    """Chow component of the Chow-Witt Pontryagin class p_i of BGL_m (p_i in degree 2i)."""
    if i < 1 or 2 * i > D:
        raise InputError(f"need 1 <= i and 2i <= D, got i={i}, D={D}")
    ctx = bgl_truncated(m, D)
    ci = ctx.chern(i)
    out = (ci * ci).scale(-1 if i % 2 else 1)
    for j in range(max(0, 2 * i - m), i):
        out = out + (ctx.chern(j) * ctx.chern(2 * i - j)).scale(2 * (-1 if j % 2 else 1))
    return out


@dataclass(frozen=True)
class PontryaginTensor:
    """Sum of p_a (x) p_b in the cohomology of BGL_{m1} x BGL_{m2}."""

    m1: int
    m2: int
    terms: Mapping[Tuple[int, int], int]

    def __str__(self) -> str:
        def p(j):
            return "1" if j == 0 else f"p{j}"

        parts = [f"{p(a)}⊗{p(b)}" for (a, b) in sorted(self.terms, reverse=True)]
        return " + ".join(parts) or "0"

    def rho(self, D: int) -> Dict[Tuple, int]:
        """Mod-2 image, as pairs of Chern monomials: p_j -> c_j^2."""
        out = {}
        for (a, b), c in self.terms.items():
            ma = tuple(2 if j == a - 1 else 0 for j in range(self.m1))
            mb = tuple(2 if j == b - 1 else 0 for j in range(self.m2))
            out[(ma, mb)] = (out.get((ma, mb), 0) + c) % 2
        return {k: v for k, v in out.items() if v}


def pontryagin_whitney(m1: int, m2: int, i: int) -> PontryaginTensor:
    """p_i(E1 + E2) = sum_j p_j(E1) p_{i-j}(E2)."""
    if i < 0 or i > m1 + m2:
        raise InputError(f"Pontryagin index {i} out of range for rank {m1 + m2}")
    return PontryaginTensor(m1, m2, {(j, i - j): 1 for j in range(max(0, i - m2), min(i, m1) + 1)})


def format_pontryagin_chow(x: ChowElem) -> str:
    parts = []
    for mono, c in sorted(x.terms.items(), reverse=True):
        body = format_chern_monomial(mono)
        parts.append(body if c == 1 else f"{c}*{body}")
    return " + ".join(parts) or "0"
