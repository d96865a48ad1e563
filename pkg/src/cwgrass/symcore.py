"""Exact algebra substrate.

Graded polynomials, Schur expansion of polynomials in elementary symmetric
functions, integer Smith/Hermite normal forms, F2 elimination on int bitsets
and pullbacks of finitely generated abelian groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

__all__ = [
    "Partition",
    "Generator",
    "GradedPoly",
    "AbelianGroupType",
    "FGAbelian",
    "GroupHom",
    "SNFResult",
    "InputError",
    "partitions_in_box",
    "monomials_of_degree",
    "conjugate",
    "schur_expand",
    "schur_expand_monomial",
    "schur_to_elementary",
    "smith_normal_form",
    "hermite_normal_form",
    "solve_in_lattice",
    "left_kernel",
    "lattice_equal",
    "group_type",
    "pullback_group",
    "f2_solve",
    "f2_rref",
    "f2_rank",
    "f2_kernel",
    "f2_in_span",
    "f2_coordinates",
    "bits_to_vector",
    "vector_to_bits",
]

Partition = Tuple[int, ...]
Monomial = Tuple[int, ...]


class InputError(ValueError):
    """Inconsistent or malformed input to an algebra routine."""


# ---------------------------------------------------------------------------
# partitions and monomials


def partitions_in_box(rows: int, width: int, d: int) -> List[Partition]:
    """Partitions of d with at most ``rows`` parts, each at most ``width``.

    Sorted in descending lexicographic order.
    """
    out: List[Partition] = []

    def rec(remaining: int, max_part: int, slots: int, acc: List[int]) -> None:
        if remaining == 0:
            out.append(tuple(acc))
            return
        if slots == 0:
            return
        for part in range(min(max_part, remaining), 0, -1):
            if part * slots < remaining:
                break
            acc.append(part)
            rec(remaining - part, part, slots - 1, acc)
            acc.pop()

    if d < 0:
        return []
    rec(d, width, rows, [])
    return out


def monomials_of_degree(degrees: Sequence[int], d: int) -> List[Monomial]:
    """Exponent vectors e with sum(e_i * degrees[i]) == d, descending lex order."""
    out: List[Monomial] = []
    m = len(degrees)

    def rec(i: int, remaining: int, acc: List[int]) -> None:
        if i == m:
            if remaining == 0:
                out.append(tuple(acc))
            return
        deg = degrees[i]
        for e in range(remaining // deg, -1, -1):
            acc.append(e)
            rec(i + 1, remaining - e * deg, acc)
            acc.pop()

    if any(g <= 0 for g in degrees):
        raise InputError("generator degrees must be positive")
    if d < 0:
        return []
    rec(0, d, [])
    return out


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > i) for i in range(lam[0]))


# ---------------------------------------------------------------------------
# graded polynomials


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    twist: int = 0


@dataclass(frozen=True)
class GradedPoly:
    """Polynomial over Z (modulus 0) or F2 (modulus 2) in named generators."""

    gens: Tuple[Generator, ...]
    terms: Mapping[Monomial, int] = field(default_factory=dict)
    modulus: int = 0

    def __post_init__(self):
        clean: Dict[Monomial, int] = {}
        for mono, c in self.terms.items():
            if len(mono) != len(self.gens):
                raise InputError("exponent vector length does not match generators")
            if self.modulus:
                c %= self.modulus
            if c:
                clean[tuple(mono)] = c
        object.__setattr__(self, "gens", tuple(self.gens))
        object.__setattr__(self, "terms", clean)

    @classmethod
    def gen(cls, gens: Sequence[Generator], i: int, modulus: int = 0) -> "GradedPoly":
        mono = tuple(1 if j == i else 0 for j in range(len(gens)))
        return cls(tuple(gens), {mono: 1}, modulus)

    @classmethod
    def one(cls, gens: Sequence[Generator], modulus: int = 0) -> "GradedPoly":
        return cls(tuple(gens), {tuple(0 for _ in gens): 1}, modulus)

    def bidegree(self, mono: Monomial) -> Tuple[int, int]:
        d = sum(e * g.degree for e, g in zip(mono, self.gens))
        t = sum(e * g.twist for e, g in zip(mono, self.gens)) % 2
        return d, t

    def components(self) -> Dict[Tuple[int, int], "GradedPoly"]:
        out: Dict[Tuple[int, int], Dict[Monomial, int]] = {}
        for mono, c in self.terms.items():
            out.setdefault(self.bidegree(mono), {})[mono] = c
        return {k: GradedPoly(self.gens, v, self.modulus) for k, v in sorted(out.items())}

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "GradedPoly") -> None:
        if self.gens != other.gens or self.modulus != other.modulus:
            raise InputError("polynomials live in different rings")

    def __add__(self, other: "GradedPoly") -> "GradedPoly":
        self._check(other)
        t = dict(self.terms)
        for mono, c in other.terms.items():
            t[mono] = t.get(mono, 0) + c
        return GradedPoly(self.gens, t, self.modulus)

    def __neg__(self) -> "GradedPoly":
        return GradedPoly(self.gens, {m: -c for m, c in self.terms.items()}, self.modulus)

    def __sub__(self, other: "GradedPoly") -> "GradedPoly":
        return self + (-other)

    def scale(self, a: int) -> "GradedPoly":
        return GradedPoly(self.gens, {m: a * c for m, c in self.terms.items()}, self.modulus)

    def __mul__(self, other: "GradedPoly") -> "GradedPoly":
        self._check(other)
        return GradedPoly(self.gens, poly_mul(self.terms, other.terms), self.modulus)

    def __pow__(self, e: int) -> "GradedPoly":
        out = GradedPoly.one(self.gens, self.modulus)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.gens == other.gens and self.modulus == other.modulus and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.gens, self.modulus, tuple(sorted(self.terms.items()))))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, reverse=True):
            c = self.terms[mono]
            factors = [
                g.name if e == 1 else f"{g.name}^{e}" for g, e in zip(self.gens, mono) if e
            ]
            body = "*".join(factors) or "1"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)


def poly_mul(a: Mapping[Monomial, int], b: Mapping[Monomial, int]) -> Dict[Monomial, int]:
    out: Dict[Monomial, int] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


# ---------------------------------------------------------------------------
# Schur expansion (Pieri rule for elementary symmetric functions)


def _pieri_e(lam: Partition, j: int, k: int, width: int) -> List[Partition]:
    """Partitions obtained from lam by adding a vertical j-strip, at most k rows."""
    padded = list(lam) + [0] * (k - len(lam))
    out = []
    for rows in combinations(range(k), j):
        new = padded[:]
        ok = True
        for r in rows:
            new[r] += 1
            if new[r] > width:
                ok = False
                break
        if not ok:
            continue
        if all(new[i] >= new[i + 1] for i in range(k - 1)):
            out.append(tuple(p for p in new if p))
    return out


@lru_cache(maxsize=None)
def schur_expand_monomial(exps: Monomial, k: int, width: int) -> Dict[Partition, int]:
    """Schur expansion of prod e_j^exps[j-1] in k variables, truncated to width."""
    idx = max((i for i, e in enumerate(exps) if e), default=None)
    if idx is None:
        return {(): 1}
    j = idx + 1
    if j > k:
        return {}
    rest = list(exps)
    rest[idx] -= 1
    base = schur_expand_monomial(tuple(rest), k, width)
    out: Dict[Partition, int] = {}
    for lam, c in base.items():
        for mu in _pieri_e(lam, j, k, width):
            out[mu] = out.get(mu, 0) + c
    return {mu: c for mu, c in out.items() if c}


def schur_expand(
    p: GradedPoly | Mapping[Monomial, int], box_width: int, k: int | None = None, modulus: int = 0
) -> Dict[Partition, int]:
    """Expand a polynomial in e_1..e_k in the Schur basis, dropping s_lam with lam_1 > box_width."""
    if isinstance(p, GradedPoly):
        terms = p.terms
        modulus = modulus or p.modulus
        if k is None:
            k = len(p.gens)
    else:
        terms = p
    if k is None:
        k = max((len(m) for m in terms), default=0)
    out: Dict[Partition, int] = {}
    for mono, c in terms.items():
        padded = tuple(mono[:k]) + (0,) * max(0, k - len(mono))
        if any(mono[k:]):
            continue  # e_j with j > k vanishes in k variables
        for lam, a in schur_expand_monomial(padded, k, box_width).items():
            out[lam] = out.get(lam, 0) + a * c
    if modulus:
        return {lam: c % modulus for lam, c in out.items() if c % modulus}
    return {lam: c for lam, c in out.items() if c}


def elementary_exponents(lam: Partition, k: int) -> Monomial:
    """Exponents a with prod e_j^a_j = e_{lam'} (a_j = columns of height j)."""
    conj = conjugate(lam)
    a = [0] * k
    for h in conj:
        a[h - 1] += 1
    return tuple(a)


@lru_cache(maxsize=None)
def _schur_to_elementary(lam: Partition, k: int) -> Tuple[Tuple[Monomial, int], ...]:
    width = lam[0] if lam else 0
    exps = elementary_exponents(lam, k)
    expansion = schur_expand_monomial(exps, k, max(width, 1))
    result: Dict[Monomial, int] = {exps: 1}
    for mu, c in expansion.items():
        if mu == lam:
            if c != 1:
                raise ArithmeticError("Kostka triangularity violated")
            continue
        for mono, a in _schur_to_elementary(mu, k):
            result[mono] = result.get(mono, 0) - c * a
    return tuple(sorted((m, c) for m, c in result.items() if c))


def schur_to_elementary(lam: Partition, k: int) -> Dict[Monomial, int]:
    """s_lam as a polynomial in e_1..e_k (inverse of the unitriangular Kostka matrix)."""
    return dict(_schur_to_elementary(tuple(lam), k))


# ---------------------------------------------------------------------------
# integer normal forms


IntMatrix = List[List[int]]


@dataclass(frozen=True)
class SNFResult:
    factors: Tuple[int, ...]  # nonzero invariant factors d_1 | d_2 | ...
    U: Tuple[Tuple[int, ...], ...]  # U * M * V = D
    V: Tuple[Tuple[int, ...], ...]
    rank: int
    shape: Tuple[int, int]


def _identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]]) -> SNFResult:
    """Smith normal form with unimodular transforms, U M V = diag(d_1, ..., d_r, 0, ...)."""
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    if any(len(row) != n for row in A):
        raise InputError("ragged matrix")
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        if q:
            A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        if q:
            for row in A:
                row[dst] -= q * row[src]
            for row in V:
                row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        # pick smallest nonzero entry in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: pivot must divide the whole trailing block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)  # row_t += row_bad
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    factors = tuple(A[i][i] for i in range(min(m, n)) if A[i][i])
    return SNFResult(
        factors=factors,
        U=tuple(map(tuple, U)),
        V=tuple(map(tuple, V)),
        rank=len(factors),
        shape=(m, n),
    )


def hermite_normal_form(rows: Iterable[Sequence[int]], ncols: int | None = None) -> List[List[int]]:
    """Row-style Hermite normal form (nonzero rows only).

    Pivots are positive and entries above each pivot are reduced into [0, pivot).
    """
    A = [list(map(int, r)) for r in rows]
    if ncols is None:
        ncols = len(A[0]) if A else 0
    r = 0
    for c in range(ncols):
        # gcd-combine rows r.. in column c
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            changed = False
            for i in range(r + 1, len(A)):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][c]:
                        changed = True
            if not changed:
                break
        if r < len(A) and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
            r += 1
            if r == len(A):
                break
    return [row for row in A[:r] if any(row)]


def _pivot_col(row: Sequence[int]) -> int:
    for j, a in enumerate(row):
        if a:
            return j
    return -1


def solve_in_lattice(basis_hnf: Sequence[Sequence[int]], v: Sequence[int]) -> List[int] | None:
    """Integer coordinates of v in the HNF basis, or None if v is not in the lattice."""
    v = list(v)
    coords = []
    for row in basis_hnf:
        p = _pivot_col(row)
        if v[p] % row[p]:
            return None
        q = v[p] // row[p]
        coords.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    if any(v):
        return None
    return coords


def left_kernel(M: Sequence[Sequence[int]]) -> List[List[int]]:
    """Basis of {x : x M = 0} (saturated)."""
    m = len(M)
    if m == 0:
        return []
    if not M[0]:
        return _identity(m)
    res = smith_normal_form(M)
    return [list(res.U[i]) for i in range(res.rank, m)]


def lattice_equal(a: Iterable[Sequence[int]], b: Iterable[Sequence[int]], ncols: int) -> bool:
    return hermite_normal_form(a, ncols) == hermite_normal_form(b, ncols)


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class AbelianGroupType:
    free_rank: int
    torsion_invariants: Tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for d in self.torsion_invariants:
            parts.append(f"Z/{d}")
        return " + ".join(parts) or "0"

    def as_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion_invariants)}


@dataclass(frozen=True)
class FGAbelian:
    """Z^ngens modulo the row span of ``relations``."""

    ngens: int
    relations: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        rels = tuple(tuple(int(a) for a in r) for r in self.relations)
        if any(len(r) != self.ngens for r in rels):
            raise InputError("relation length does not match number of generators")
        object.__setattr__(self, "relations", rels)

    @classmethod
    def free(cls, n: int) -> "FGAbelian":
        return cls(n, ())

    @classmethod
    def elementary(cls, n: int, p: int = 2) -> "FGAbelian":
        return cls(n, tuple(tuple(p if i == j else 0 for j in range(n)) for i in range(n)))

    def direct_sum(self, other: "FGAbelian") -> "FGAbelian":
        rels = [r + (0,) * other.ngens for r in self.relations]
        rels += [(0,) * self.ngens + r for r in other.relations]
        return FGAbelian(self.ngens + other.ngens, tuple(rels))


@dataclass(frozen=True)
class GroupHom:
    source: FGAbelian
    target: FGAbelian
    matrix: Tuple[Tuple[int, ...], ...]  # row i = image of source generator i

    def __post_init__(self):
        mat = tuple(tuple(int(a) for a in r) for r in self.matrix)
        if len(mat) != self.source.ngens or any(len(r) != self.target.ngens for r in mat):
            raise InputError("homomorphism matrix has inconsistent dimensions")
        object.__setattr__(self, "matrix", mat)


def group_type(G: FGAbelian) -> AbelianGroupType:
    if not G.relations or G.ngens == 0:
        return AbelianGroupType(G.ngens, ())
    res = smith_normal_form(G.relations)
    tors = tuple(d for d in res.factors if d > 1)
    return AbelianGroupType(G.ngens - res.rank, tors)


def pullback_generators(f: GroupHom, g: GroupHom) -> Tuple[List[List[int]], List[List[int]]]:
    """Basis of the lattice K = {(a, b) : f(a) - g(b) in rel(C)} and the relations of A+B in it."""
    if f.target != g.target:
        raise InputError("pullback maps must share a target")
    C = f.target
    m = f.source.ngens + g.source.ngens
    c = C.ngens
    H = [list(r) for r in f.matrix] + [[-a for a in r] for r in g.matrix]
    stacked = H + [list(r) for r in C.relations]
    if c == 0:
        gens = _identity(m)
    else:
        gens = [row[:m] for row in left_kernel(stacked)]
    K = hermite_normal_form(gens, m) if gens else []
    rel = f.source.direct_sum(g.source).relations
    coords = []
    for r in rel:
        x = solve_in_lattice(K, r)
        if x is None:
            raise InputError("homomorphism does not respect relations")
        coords.append(x)
    return K, coords


def pullback_group(f: GroupHom, g: GroupHom) -> AbelianGroupType:
    """Isomorphism type of {(a, b) : f(a) = g(b)} in invariant-factor form."""
    K, coords = pullback_generators(f, g)
    return group_type(FGAbelian(len(K), tuple(map(tuple, coords))))


# ---------------------------------------------------------------------------
# F2 linear algebra on int bitsets (bit j = column j)


def vector_to_bits(v: Sequence[int]) -> int:
    out = 0
    for j, a in enumerate(v):
        if a % 2:
            out |= 1 << j
    return out


def bits_to_vector(x: int, n: int) -> Tuple[int, ...]:
    return tuple((x >> j) & 1 for j in range(n))


def f2_rref(rows: Iterable[int]) -> List[int]:
    """Reduced row echelon basis of the span; pivot = lowest set bit, sorted by pivot."""
    basis: List[int] = []
    for v in rows:
        for b in basis:
            if v & (b & -b):
                v ^= b
        if v:
            low = v & -v
            basis = [b ^ v if b & low else b for b in basis]
            basis.append(v)
    basis.sort(key=lambda b: (b & -b))
    return basis


def f2_rank(rows: Iterable[int]) -> int:
    return len(f2_rref(rows))


def f2_in_span(v: int, rref: Sequence[int]) -> bool:
    for b in rref:
        if v & (b & -b):
            v ^= b
    return v == 0


def f2_coordinates(v: int, rref: Sequence[int]) -> int | None:
    """Bitmask of rref rows summing to v, or None."""
    out = 0
    for i, b in enumerate(rref):
        if v & (b & -b):
            v ^= b
            out |= 1 << i
    return out if v == 0 else None


def f2_kernel(columns: Sequence[int], ncols: int | None = None) -> List[int]:
    """Kernel of x -> sum x_j columns[j]; returned as bitsets over column indices."""
    n = len(columns) if ncols is None else ncols
    # track combinations alongside reduced images
    pairs: List[Tuple[int, int]] = []  # (image, combination)
    kernel: List[int] = []
    for j in range(n):
        img, comb = columns[j], 1 << j
        for bi, bc in pairs:
            if img & (bi & -bi):
                img ^= bi
                comb ^= bc
        if img:
            pairs.append((img, comb))
        else:
            kernel.append(comb)
    return f2_rref(kernel)


def f2_solve(M: Sequence[Sequence[int]], mode: str) -> List[Tuple[int, ...]]:
    """Kernel {x : M x = 0} or column-space image of an F2 matrix."""
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    columns = [vector_to_bits([M[i][j] for i in range(nrows)]) for j in range(ncols)]
    if mode == "kernel":
        return [bits_to_vector(b, ncols) for b in f2_kernel(columns, ncols)]
    if mode == "image":
        return [bits_to_vector(b, nrows) for b in f2_rref(columns)]
    raise InputError(f"mode must be 'kernel' or 'image', not {mode!r}")
