"""Command-line front end.

Exit status: 0 ok, 1 parse error, 2 range error, 3 internal inconsistency,
4 unsupported coefficient model.

Expression grammar (no whitespace)::

    expr  := term (('+' | '-') term)*
    term  := [int '*'] atom ('*' atom)*
    atom  := 'p' int ['q'] | 'e' | 'eq' | 'R' | 't0'
           | ('b' | 't' | 'bq' | 'tq') '[' int (',' int)* ']'

``p4`` is the Pontryagin class in degree 8 of the subbundle, ``p4q`` the one
of the quotient bundle; ``b[2,4]`` is beta applied to c2*c4 (untwisted),
``t[...]`` the twisted Bockstein and ``t0`` = tau of the empty set.  Chow
classes for ``sq2`` use atoms ``c<i>`` and ``cq<i>`` with optional ``^k``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .chow import BGLContext, ChowContext, ChowElem, GrassContext, bgl_truncated, complementary_class, grassmannian
from .coeffs import MODEL_NAMES, ConfigurationError, witt_model
from .icoh import CharClass, IElem, ISpace, char_class, i_mul, i_space, i_table, rho
from .steenrod import sq2, sq2_image, sq2_image_rref, sq2_kernel, sq2_matrix
from .symcore import InputError, f2_rank
from .wcoh import InternalInconsistency, w_ring

try:  # Python 3.11+
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

__all__ = ["main", "run", "Query", "ParseError", "parse_space", "parse_expr", "element_to_json", "element_from_json"]

CACHE_ENV = "CWGRASS_CACHE_DIR"

EXIT_OK, EXIT_PARSE, EXIT_RANGE, EXIT_INTERNAL, EXIT_MODEL = 0, 1, 2, 3, 4


class ParseError(ValueError):
    def __init__(self, msg: str, text: str = "", pos: int | None = None):
        where = f" at position {pos} in {text!r}" if pos is not None else ""
        super().__init__(msg + where)
        self.pos = pos


# ---------------------------------------------------------------------------
# spaces and expressions


def parse_space(text: str, max_degree: int = 10) -> ChowContext:
    m = re.fullmatch(r"gr:(\d+),(\d+)|bgl:(\d+)|proj:(\d+)", text or "")
    if not m:
        raise ParseError("space must be gr:k,n, bgl:n or proj:n", text, 0)
    if m.group(1):
        return grassmannian(int(m.group(1)), int(m.group(2)))
    if m.group(3):
        return bgl_truncated(int(m.group(3)), max_degree)
    n = int(m.group(4))
    if n < 1:
        raise InputError("proj:n needs n >= 1")
    return grassmannian(1, n + 1)


_ATOM = re.compile(r"(bq|tq|b|t)\[(\d+(?:,\d+)*)\]|t0|p(\d+)(q?)|eq|e|R")


def _parse_terms(text: str, atom_re, what: str) -> List[Tuple[int, List[Tuple[re.Match, int]]]]:
    """Split into signed terms of atoms; returns (coefficient, [(match, power)])."""
    text = "".join(text.split())  # positions in errors refer to the compacted text
    if not text:
        raise ParseError(f"empty {what}", text, 0)
    pos = 0
    terms = []
    sign = 1
    if text[0] in "+-":
        sign = -1 if text[0] == "-" else 1
        pos = 1
    while True:
        coeff = sign
        m = re.match(r"\d+", text[pos:])
        atoms = []
        if m and (pos + m.end() == len(text) or text[pos + m.end()] in "*+-"):
            coeff *= int(m.group())
            pos += m.end()
            if pos < len(text) and text[pos] == "*":
                pos += 1
            else:
                terms.append((coeff, atoms))
                if pos == len(text):
                    return terms
                sign = -1 if text[pos] == "-" else 1
                pos += 1
                continue
        while True:
            am = atom_re.match(text, pos)
            if not am:
                raise ParseError(f"expected an atom in {what}", text, pos)
            pos = am.end()
            power = 1
            pm = re.match(r"\^(\d+)", text[pos:])
            if pm:
                power = int(pm.group(1))
                pos += pm.end()
            atoms.append((am, power))
            if pos < len(text) and text[pos] == "*":
                pos += 1
                continue
            break
        terms.append((coeff, atoms))
        if pos == len(text):
            return terms
        if text[pos] not in "+-":
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        sign = -1 if text[pos] == "-" else 1
        pos += 1


def _i_atom(sp: ISpace, m: re.Match) -> IElem:
    s = m.group(0)
    if m.group(1):
        kind = m.group(1)
        idx = tuple(int(a) for a in m.group(2).split(","))
        side = "quot" if kind.endswith("q") else "sub"
        twist = 1 if kind.startswith("t") else 0
        return char_class(sp, CharClass.bockstein(idx, twist, side))
    if s == "t0":
        return char_class(sp, CharClass.bockstein((), 1))
    if s == "e":
        return char_class(sp, CharClass.euler("sub"))
    if s == "eq":
        return char_class(sp, CharClass.euler("quot"))
    if s == "R":
        return char_class(sp, CharClass.R())
    if m.group(3):
        return char_class(sp, CharClass.pontryagin(int(m.group(3)), "quot" if m.group(4) else "sub"))
    raise ParseError("unknown atom", s, 0)


def parse_expr(sp: ISpace, text: str) -> IElem:
    """Evaluate an I-cohomology expression."""
    total: Optional[IElem] = None
    for coeff, atoms in _parse_terms(text, _ATOM, "expression"):
        term = sp.one()
        for am, power in atoms:
            a = _i_atom(sp, am)
            for _ in range(power):
                term = i_mul(term, a)
        term = term.scale(coeff)
        if total is None:
            total = term
        else:
            try:
                total = total + term
            except ValueError as exc:
                raise InputError(str(exc)) from None
    assert total is not None
    return total


_CHOW_ATOM = re.compile(r"c(q?)(\d+)")


def parse_chow(ctx: ChowContext, text: str, modulus: int = 2) -> ChowElem:
    total = ctx.zero(modulus)
    for coeff, atoms in _parse_terms(text, _CHOW_ATOM, "Chow class"):
        term = ctx.one(modulus)
        for am, power in atoms:
            i = int(am.group(2))
            if am.group(1):
                if not isinstance(ctx, GrassContext):
                    raise InputError("complementary classes need a Grassmannian")
                a = complementary_class(ctx, i, "F2" if modulus == 2 else "Z")
            else:
                if i > ctx.rank:
                    raise InputError(f"Chern index {i} exceeds rank {ctx.rank}")
                a = ctx.chern(i, modulus)
            for _ in range(power):
                term = term * a
        total = total + term.scale(coeff)
    return total


def _cw_atom(sp: ISpace, m: re.Match):
    from .chowwitt import CWElem, pontryagin_chow_component
    from .chow import lift_to_integers

    x = _i_atom(sp, m)
    ctx = sp.ctx
    s = m.group(0)
    if s == "e":
        z = ctx.chern(ctx.rank)
    elif s == "eq":
        z = complementary_class(ctx, ctx.n - ctx.k, "Z")
    elif m.group(3) and not m.group(4):
        z = pontryagin_chow_component(ctx, int(m.group(3)))
    else:
        z = lift_to_integers(rho(x))
    return CWElem(x, z)


def parse_cw(sp: ISpace, text: str):
    from .chowwitt import CWElem, cw_mul

    total = None
    for coeff, atoms in _parse_terms(text, _ATOM, "expression"):
        term = CWElem(sp.one(), sp.ctx.one())
        for am, power in atoms:
            a = _cw_atom(sp, am)
            for _ in range(power):
                term = cw_mul(term, a)
        term = CWElem(term.i.scale(coeff), term.z.scale(coeff))
        total = term if total is None else total + term
    return total


# ---------------------------------------------------------------------------
# serialization


def _key_json(key) -> list:
    return list(key)


def element_to_json(x: IElem) -> dict:
    ring = x.space.wring
    free = []
    for m, c in sorted(x.free.terms.items(), reverse=True):
        free.append({"monomial": {n: e for n, e in zip(ring.names, m) if e}, "coeff": c})
    tors = sorted((_key_json(k) for k in x.tors.terms), reverse=True)
    return {
        "space": x.space.label,
        "model": x.space.model.name,
        "degree": x.degree,
        "twist": x.twist,
        "free": free,
        "torsion_rho": tors,
        "text": str(x),
    }


def element_from_json(doc: dict, max_degree: int = 10) -> IElem:
    ctx = parse_space(doc["space"], max_degree)
    sp = i_space(ctx, doc.get("model", "real"))
    ring = sp.wring
    terms = {}
    for entry in doc["free"]:
        mono = tuple(entry["monomial"].get(n, 0) for n in ring.names)
        terms[mono] = entry["coeff"]
    free = ring.elem(terms, sp.model.modulus)
    tors = ctx.elem({tuple(k): 1 for k in doc["torsion_rho"]}, 2)
    return sp.elem(doc["degree"], doc["twist"], free, tors)


def cw_to_json(x) -> dict:
    z = x.z
    return {
        "i": element_to_json(x.i),
        "chow": [{"key": _key_json(k), "coeff": c} for k, c in sorted(z.terms.items(), reverse=True)],
        "chow_text": str(z),
        "text": str(x),
    }


# ---------------------------------------------------------------------------
# queries


@dataclass
class Query:
    verb: str
    space: str = ""
    twist: Optional[int] = None
    degree: Optional[int] = None
    max_degree: int = 10
    lhs: str = ""
    rhs: str = ""
    expr: str = ""
    fmt: str = "json"
    coefficients: str = "real"
    table: bool = False
    check_phi: bool = False
    n: Optional[int] = None
    suite: str = "all"
    max_dim: int = 9
    extra: Dict[str, Any] = field(default_factory=dict)

    def cache_key(self) -> str:
        doc = {k: v for k, v in self.__dict__.items() if k != "extra"}
        return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()[:24]


def _twists(q: Query) -> List[int]:
    if q.twist is None:
        return [0, 1]
    if q.twist not in (0, 1):
        raise InputError("twist must be 0 or 1")
    return [q.twist]


def _check_degree(ctx: ChowContext, d: int) -> None:
    if not 0 <= d <= ctx.dim:
        raise InputError(f"degree {d} out of range 0..{ctx.dim}")


def _space(q: Query) -> ChowContext:
    if not q.space:
        raise ParseError("--space is required")
    return parse_space(q.space, q.max_degree)


def _do_sq2(q: Query) -> dict:
    ctx = _space(q)
    x = parse_chow(ctx, q.expr)
    t = _twists(q)[0]
    y = sq2(ctx, t, x) if not x.is_zero() else ctx.zero(2)
    return {"verb": "sq2", "space": ctx.label, "twist": t, "input": str(x), "result": str(y)}


def _do_sq2_table(q: Query) -> dict:
    ctx = _space(q)
    rows = []
    for t in _twists(q):
        for d in range(ctx.dim + 1):
            rank = len(ctx.basis(d))
            img_out = f2_rank(sq2_matrix(ctx, t, d)) if d < ctx.dim or ctx.kind == "gr" else None
            rows.append(
                {
                    "degree": d,
                    "twist": t,
                    "rank": rank,
                    "kernel": rank - img_out if img_out is not None else None,
                    "image": len(sq2_image_rref(ctx, t, d)),
                    "kernel_basis": [str(x) for x in sq2_kernel(ctx, t, d)] if img_out is not None else None,
                    "image_basis": [str(x) for x in sq2_image(ctx, t, d)],
                }
            )
    return {"verb": "sq2-table", "space": ctx.label, "rows": rows}


def _do_wring(q: Query) -> dict:
    ctx = _space(q)
    ring = w_ring(ctx)
    rows = []
    for t in _twists(q):
        for d in range(ctx.dim + 1):
            basis = [ring.format_mono(m) for m in ring.basis(d, t)]
            if q.table or basis:
                rows.append({"degree": d, "twist": t, "basis": basis})
    return {"verb": "wring", "space": ctx.label, "generators": list(ring.names), "rows": rows}


def _do_iring(q: Query) -> dict:
    ctx = _space(q)
    sp = i_space(ctx, q.coefficients)
    rows = [r for r in i_table(sp) if r["twist"] in _twists(q)]
    return {"verb": "iring", "space": ctx.label, "model": sp.model.name, "rows": rows}


def _do_imul(q: Query) -> dict:
    ctx = _space(q)
    sp = i_space(ctx, q.coefficients)
    x, y = parse_expr(sp, q.lhs), parse_expr(sp, q.rhs)
    z = i_mul(x, y)
    return {
        "verb": "imul",
        "space": ctx.label,
        "lhs": element_to_json(x),
        "rhs": element_to_json(y),
        "result": element_to_json(z),
    }


def _do_cw(q: Query) -> dict:
    from .chowwitt import cw_group

    ctx = _space(q)
    witt_model(q.coefficients)
    degrees = [q.degree] if q.degree is not None else list(range(ctx.dim + 1))
    rows = []
    for t in _twists(q):
        for d in degrees:
            _check_degree(ctx, d)
            g = cw_group(ctx, d, t, q.coefficients)
            rows.append({"degree": d, "twist": t, "group": g.as_dict(), "text": str(g)})
    return {"verb": "cw", "space": ctx.label, "rows": rows}


def _do_cwmul(q: Query) -> dict:
    from .chowwitt import cw_mul

    ctx = _space(q)
    sp = i_space(ctx, q.coefficients)
    x, y = parse_cw(sp, q.lhs), parse_cw(sp, q.rhs)
    return {"verb": "cwmul", "space": ctx.label, "lhs": cw_to_json(x), "rhs": cw_to_json(y), "result": cw_to_json(cw_mul(x, y))}


def _do_bgl(q: Query) -> dict:
    from .bgl import bgl_space, check_even_rank_identity, check_ideal_preserved, check_odd_cokernel, check_type3_mod2
    from .icoh import i_basis

    n = q.n
    if n is None:
        if q.space.startswith("bgl:"):
            n = int(q.space[4:])
        else:
            raise ParseError("bgl needs --n or --space bgl:n")
    if n < 1:
        raise InputError("n must be positive")
    D = q.max_degree
    doc: Dict[str, Any] = {"verb": "bgl", "n": n, "max_degree": D}
    if q.table or not q.check_phi:
        sp = bgl_space(n, D, q.coefficients)
        rows = []
        for t in _twists(q):
            for d in range(D + 1):
                basis = i_basis(sp, d, t)
                free = sum(1 for b in basis if not b.is_torsion())
                rows.append({"degree": d, "twist": t, "free_rank": free, "torsion_rank": len(basis) - free})
        doc["rows"] = rows
    if q.check_phi:
        reports = [check_type3_mod2(n, D).as_dict()]
        if n >= 2:
            reports.append(check_ideal_preserved(n, D, q.coefficients).as_dict())
            if n % 2 == 0:
                reports.append(check_even_rank_identity(n, D).as_dict())
            elif n >= 3:
                reports.append(check_odd_cokernel(n, D).as_dict())
        doc["checks"] = reports
        doc["passed"] = all(r["passed"] for r in reports)
    return doc


def _do_verify(q: Query) -> dict:
    from .oracle import axiom_sweep, lr_product, partition_rank, pullback_type_oracle
    from .chow import chow_mul
    from .wcoh import euler_mult_check

    suite = q.suite
    if suite not in ("all", "chow", "w", "i", "cw"):
        raise ParseError("suite must be all, chow, w, i or cw", suite, 0)
    reports = []
    spaces = [(k, n) for n in range(2, q.max_dim + 2) for k in range(1, n) if k * (n - k) <= q.max_dim]
    if suite in ("all", "chow"):
        bad = None
        count = 0
        for k, n in spaces:
            ctx = grassmannian(k, n)
            for d in range(ctx.dim + 1):
                if len(ctx.basis(d)) != partition_rank(k, n, d):
                    bad = bad or f"rank mismatch for Gr({k},{n}) in degree {d}"
            for a in [p for d in range(ctx.dim + 1) for p in ctx.basis(d)]:
                for b in [p for d in range(ctx.dim + 1) for p in ctx.basis(d)]:
                    count += 1
                    if dict(chow_mul(ctx.basis_elem(a), ctx.basis_elem(b)).terms) != lr_product(a, b, k, n):
                        bad = bad or f"chow_mul != lr_product for {a}, {b} in Gr({k},{n})"
        reports.append({"check": "chow_vs_lr", "passed": bad is None, "checked": count, "counterexample": bad})
    if suite in ("all", "w"):
        for k, n in spaces:
            for which in ("e_k", "e^⊥"):
                r = euler_mult_check(grassmannian(k, n), which)
                reports.append({"check": "euler_mult", "space": f"gr:{k},{n}", "which": which, "case": r.case, "passed": r.passed})
    if suite in ("all", "i"):
        for k, n in spaces:
            reports.append(axiom_sweep(grassmannian(k, n), q.max_dim).as_dict())
    if suite in ("all", "cw"):
        for k, n in spaces:
            ctx = grassmannian(k, n)
            for d in range(ctx.dim + 1):
                for t in (0, 1):
                    r = pullback_type_oracle(ctx, d, t)
                    if r.counterexample and "exceed" in r.counterexample:
                        continue
                    reports.append(r.as_dict())
    return {"verb": "verify", "suite": suite, "max_dim": q.max_dim, "passed": all(r["passed"] for r in reports), "reports": reports}


VERBS = {
    "sq2": _do_sq2,
    "sq2-table": _do_sq2_table,
    "wring": _do_wring,
    "iring": _do_iring,
    "imul": _do_imul,
    "cw": _do_cw,
    "cwmul": _do_cwmul,
    "bgl": _do_bgl,
    "verify": _do_verify,
}


def run(q: Query) -> dict:
    """Evaluate a query into an output document (a JSON-compatible dict)."""
    if q.verb not in VERBS:
        raise ParseError(f"unknown verb {q.verb!r}")
    if q.fmt not in ("json", "latex", "text"):
        raise ParseError(f"unknown format {q.fmt!r}")
    witt_model(q.coefficients)
    cache_dir = os.environ.get(CACHE_ENV)
    path = None
    if cache_dir:
        path = Path(cache_dir) / f"{q.verb}-{q.cache_key()}.json"
        if path.exists():
            return json.loads(path.read_text())
    doc = VERBS[q.verb](q)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, sort_keys=True))
    return doc


# ---------------------------------------------------------------------------
# rendering


def _latex_escape(s: str) -> str:
    return s.replace("⊥", r"^{\perp}").replace("_", r"\_")


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)
    rows = doc.get("rows")
    if fmt == "latex":
        if rows:
            cols = [c for c in sorted(rows[0]) if not isinstance(rows[0][c], dict)]

            def cell(v):
                return ", ".join(map(str, v)) if isinstance(v, list) else str(v)

            lines = [r"\begin{tabular}{" + "r" * len(cols) + "}", " & ".join(cols) + r" \\ \hline"]
            for r in rows:
                lines.append(" & ".join(_latex_escape(cell(r[c])) for c in cols) + r" \\")
            lines.append(r"\end{tabular}")
            return "\n".join(lines)
        res = doc.get("result")
        if isinstance(res, dict):
            return "$" + _latex_escape(res.get("text", "")) + "$"
        return "$" + _latex_escape(str(res)) + "$"
    # text
    out = []
    for k in sorted(doc):
        if k in ("rows", "reports", "checks"):
            continue
        v = doc[k]
        out.append(f"{k}: {v['text'] if isinstance(v, dict) and 'text' in v else v}")
    for r in rows or []:
        out.append("  " + ", ".join(f"{c}={r[c]}" for c in sorted(r)))
    for r in doc.get("reports", []) + doc.get("checks", []):
        out.append(f"  {r.get('check')}: {'pass' if r.get('passed') else 'FAIL'}")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise ParseError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cwgrass", description="Chow-Witt rings of Grassmannians and BGL_n")
    p.add_argument("--config", help="TOML file with default option values")
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--space", default=None)
        sp.add_argument("--twist", type=int, default=None)
        sp.add_argument("--degree", type=int, default=None)
        sp.add_argument("--max-degree", type=int, default=None)
        sp.add_argument("--format", dest="fmt", choices=["json", "latex", "text"], default=None)
        sp.add_argument("--coefficients", default=None)
        sp.add_argument("--config", default=None)
        return sp

    common(sub.add_parser("sq2")).add_argument("--class", dest="expr", required=True)
    common(sub.add_parser("sq2-table"))
    common(sub.add_parser("wring")).add_argument("--table", action="store_true")
    common(sub.add_parser("iring")).add_argument("--table", action="store_true")
    for verb in ("imul", "cwmul"):
        s = common(sub.add_parser(verb))
        s.add_argument("--lhs", required=True)
        s.add_argument("--rhs", required=True)
    common(sub.add_parser("cw"))
    b = common(sub.add_parser("bgl"))
    b.add_argument("--n", type=int, default=None)
    b.add_argument("--check-phi", action="store_true")
    b.add_argument("--table", action="store_true")
    v = common(sub.add_parser("verify"))
    v.add_argument("--suite", default="all")
    v.add_argument("--max-dim", type=int, default=9)
    return p


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read config file: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"invalid config file: {exc}") from None


def query_from_args(argv: Sequence[str]) -> Query:
    ns = _build_parser().parse_args(list(argv))
    if not ns.verb:
        raise ParseError("a verb is required: " + ", ".join(VERBS))
    cfg = _load_config(getattr(ns, "config", None))

    def pick(name, default):
        val = getattr(ns, name, None)
        if val is None:
            val = cfg.get(name.replace("_", "-"), cfg.get(name, default))
        return val

    return Query(
        verb=ns.verb,
        space=pick("space", ""),
        twist=pick("twist", None),
        degree=pick("degree", None),
        max_degree=int(pick("max_degree", 10)),
        lhs=getattr(ns, "lhs", "") or "",
        rhs=getattr(ns, "rhs", "") or "",
        expr=getattr(ns, "expr", "") or "",
        fmt=pick("fmt", cfg.get("format", "json")),
        coefficients=pick("coefficients", "real"),
        table=bool(getattr(ns, "table", False)),
        check_phi=bool(getattr(ns, "check_phi", False)),
        n=getattr(ns, "n", None),
        suite=getattr(ns, "suite", "all"),
        max_dim=int(getattr(ns, "max_dim", 9) or 9),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        q = query_from_args(argv)
        doc = run(q)
        print(render(doc, q.fmt))
        return EXIT_OK
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigurationError as exc:
        print(f"unsupported model: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (InputError, ValueError) as exc:
        print(f"range error: {exc}", file=sys.stderr)
        return EXIT_RANGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
