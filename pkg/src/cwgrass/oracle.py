"""Brute-force verifiers that share no code paths with the main algorithms."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .chow import ChowContext, ChowElem, GrassContext, chow_mul
from .symcore import Partition

__all__ = [
    "OracleReport",
    "lr_product",
    "lr_coefficient",
    "partition_rank",
    "axiom_sweep",
    "pullback_type_oracle",
]


@dataclass
class OracleReport:
    check: str
    params: dict
    passed: bool
    checked: int = 0
    counterexample: Optional[str] = None
    details: List[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "params": dict(self.params),
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
            "details": list(self.details),
        }


# ---------------------------------------------------------------------------
# Littlewood-Richardson by tableau enumeration


def _contains(nu: Sequence[int], lam: Sequence[int]) -> bool:
    return len(lam) <= len(nu) and all(a >= b for a, b in zip(nu, lam))


def _box_partitions(k: int, w: int, d: int) -> List[Tuple[int, ...]]:
    out = []
    for parts in product(range(w + 1), repeat=k):
        if sum(parts) == d and all(parts[i] >= parts[i + 1] for i in range(k - 1)):
            out.append(tuple(p for p in parts if p))
    return out


def lr_coefficient(lam: Partition, mu: Partition, nu: Partition) -> int:
    """Number of LR tableaux of shape nu/lam and content mu."""
    lam = list(lam)
    nu = list(nu)
    mu = [m for m in mu if m]
    if sum(nu) != sum(lam) + sum(mu) or not _contains(nu, lam):
        return 0
    lam = lam + [0] * (len(nu) - len(lam))
    cells = [(r, c) for r in range(len(nu)) for c in range(lam[r], nu[r])]
    # fill row by row, left to right; reading word is right-to-left, top-to-bottom
    filling: Dict[Tuple[int, int], int] = {}
    count = 0
    letters = len(mu)

    def lattice_ok() -> bool:
        seen = [0] * (letters + 1)
        for r in range(len(nu)):
            for c in reversed(range(lam[r], nu[r])):
                if (r, c) not in filling:
                    continue
                v = filling[(r, c)]
                seen[v] += 1
                if v > 1 and seen[v] > seen[v - 1]:
                    return False
        return True

    def rec(idx: int, used: List[int]) -> None:
        nonlocal count
        if idx == len(cells):
            if used == mu and lattice_ok():
                count += 1
            return
        r, c = cells[idx]
        for v in range(1, letters + 1):
            if used[v - 1] >= mu[v - 1]:
                continue
            if (r, c - 1) in filling and filling[(r, c - 1)] > v:
                continue
            if r > 0 and c < nu[r - 1] and c >= lam[r - 1] and filling.get((r - 1, c), 0) >= v:
                continue
            filling[(r, c)] = v
            used[v - 1] += 1
            rec(idx + 1, used)
            used[v - 1] -= 1
            del filling[(r, c)]

    rec(0, [0] * letters)
    return count


def lr_product(lam: Partition, mu: Partition, k: int, n: int) -> Dict[Tuple[int, ...], int]:
    """s_lam * s_mu in CH(Gr(k, n)): LR coefficients over all nu in the k x (n-k) box."""
    w = n - k
    out = {}
    for nu in _box_partitions(k, w, sum(lam) + sum(mu)):
        c = lr_coefficient(tuple(lam), tuple(mu), nu)
        if c:
            out[nu] = c
    return out


def partition_rank(k: int, n: int, d: int) -> int:
    """Number of partitions of d inside the k x (n-k) box by direct enumeration."""
    if d < 0:
        return 0
    return len(_box_partitions(k, n - k, d))


# ---------------------------------------------------------------------------
# ring-axiom sweep


def axiom_sweep(ctx: ChowContext, max_dim: int = 12, mul: Callable[[ChowElem, ChowElem], ChowElem] | None = None) -> OracleReport:
    """Exhaustive axiom checks for the Chow, W, I and Chow-Witt rings of ``ctx``.

    ``mul`` replaces the Chow product (used for fault injection in tests).
    """
    from .chowwitt import cw_group_generators, cw_mul
    from .coeffs import witt_model
    from .icoh import i_basis, i_mul, i_space, rho
    from .wcoh import w_mul

    params = {"space": getattr(ctx, "label", repr(ctx)), "max_dim": max_dim}
    if ctx.dim > max_dim:
        return OracleReport("axiom_sweep", params, False, 0, f"dimension {ctx.dim} exceeds max_dim {max_dim}")
    mul = mul or chow_mul
    checked = 0

    def fail(msg: str) -> OracleReport:
        return OracleReport("axiom_sweep", params, False, checked, msg)

    # Chow ring
    basis = [b for d in range(ctx.dim + 1) for b in ctx.basis_elems(d)]
    for x in basis:
        for y in basis:
            checked += 1
            xy = mul(x, y)
            if xy != mul(y, x):
                return fail(f"chow: {x} * {y} is not commutative")
            for z in basis:
                checked += 1
                if mul(xy, z) != mul(x, mul(y, z)):
                    return fail(f"chow: ({x} * {y}) * {z} != {x} * ({y} * {z})")
                if mul(x, y + z) != xy + mul(x, z):
                    return fail(f"chow: distributivity fails for {x}, {y}, {z}")
    # the reduction map must respect the (possibly replaced) Chow product
    sp = i_space(ctx, "real")
    sign = witt_model("real").sign_unit
    ib = [x for d in range(ctx.dim + 1) for t in (0, 1) for x in i_basis(sp, d, t)]
    for x in ib:
        # I(F) kills torsion
        checked += 1
        if x.is_torsion() and not x.scale(2).is_zero():
            return fail(f"icoh: 2 * {x} != 0 for a torsion class")
        for y in ib:
            checked += 1
            try:
                xy = i_mul(x, y)
            except Exception as exc:  # a broken presentation surfaces here
                return fail(f"icoh: {x} * {y} raised {exc}")
            if x.degree + y.degree > ctx.dim and not xy.is_zero():
                return fail(f"icoh: {x} * {y} nonzero above the dimension")
            if rho(xy) != mul(rho(x), rho(y)):
                return fail(f"icoh: rho({x} * {y}) != rho({x}) * rho({y})")
            yx = i_mul(y, x)
            s = sign ** ((x.degree * y.degree) % 2)
            if xy.free != yx.free.scale(s) or xy.tors != yx.tors:
                return fail(f"icoh: {x} * {y} != <-1>^(|x||y|) {y} * {x}")
            wxy = w_mul(x.free, y.free)
            if wxy != w_mul(y.free, x.free).scale(s):
                return fail(f"wcoh: graded commutativity fails for {x.free}, {y.free}")
            for z in ib:
                checked += 1
                if i_mul(xy, z) != i_mul(x, i_mul(y, z)):
                    return fail(f"icoh: associativity fails for {x}, {y}, {z}")
    # Chow-Witt: componentwise products stay compatible and project correctly
    gens = [g for d in range(ctx.dim + 1) for t in (0, 1) for g in cw_group_generators(ctx, d, t)]
    for x in gens:
        for y in gens:
            checked += 1
            try:
                p = cw_mul(x, y)
            except Exception as exc:
                return fail(f"chowwitt: {x} * {y} raised {exc}")
            if p.z != mul(x.z, y.z) or p.i != i_mul(x.i, y.i):
                return fail(f"chowwitt: projections of {x} * {y} are not multiplicative")
    return OracleReport("axiom_sweep", params, True, checked)


# ---------------------------------------------------------------------------
# pullback oracle (sympy)


def pullback_type_oracle(ctx: ChowContext, d: int, twist: int, max_gens: int = 16) -> OracleReport:
    """Pullback group type by a sympy computation, compared with cw_group.

    The lattice {x : h(x) = 0 mod 2} is found by enumerating 0/1 vectors,
    then the relations of the I-group are rewritten in a sympy HNF basis of
    that lattice and fed to sympy's Smith normal form.
    """
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import hermite_normal_form, smith_normal_form

    from .chowwitt import cw_group, cw_presentation

    pres = cw_presentation(ctx, d, twist)
    params = {"space": ctx.label, "degree": d, "twist": twist}
    fa = [list(r) for r in pres.f.matrix]
    gb = [list(r) for r in pres.g.matrix]
    H = fa + gb  # rows: images in (Z/2)^r
    N = len(H)
    r = pres.chow_rank
    if N > max_gens:
        return OracleReport("pullback_type_oracle", params, False, 0, f"{N} generators exceed max_gens")
    gens = [[2 if i == j else 0 for j in range(N)] for i in range(N)]
    for x in product((0, 1), repeat=N):
        if any(x) and all(sum(x[i] * H[i][j] for i in range(N)) % 2 == 0 for j in range(r)):
            gens.append(list(x))
    G = Matrix(gens).T  # columns generate the lattice
    L = hermite_normal_form(G)
    if L.shape != (N, N):
        return OracleReport("pullback_type_oracle", params, False, 0, "lattice is not of full rank")
    f, s = pres.free_rank, pres.torsion_rank
    rels = [[2 if j == f + i else 0 for j in range(N)] for i in range(s)]
    if rels:
        coords = L.inv() * Matrix(rels).T
        if any(c.q != 1 for c in coords):
            return OracleReport("pullback_type_oracle", params, False, 0, "relations not in the lattice")
        D = smith_normal_form(coords.T, domain=ZZ)
        diag = [abs(D[i, i]) for i in range(min(D.shape)) if D[i, i] != 0]
    else:
        diag = []
    free_rank = N - len(diag)
    torsion = tuple(sorted(int(a) for a in diag if a > 1))
    ours = cw_group(ctx, d, twist)
    passed = ours.free_rank == free_rank and ours.torsion_invariants == torsion
    rep = OracleReport("pullback_type_oracle", params, passed, 1)
    rep.details.append(f"oracle: free_rank={free_rank}, torsion={list(torsion)}; cw_group: {ours}")
    if not passed:
        rep.counterexample = rep.details[0]
    return rep
