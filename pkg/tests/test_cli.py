import json

import pytest

from cwgrass.cli import (
    EXIT_MODEL,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_RANGE,
    ParseError,
    element_from_json,
    element_to_json,
    main,
    parse_expr,
    parse_space,
)
from cwgrass.icoh import i_space
from cwgrass.symcore import InputError


def run_json(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    assert code == EXIT_OK, out.err
    return json.loads(out.out)


def test_parse_space():
    assert parse_space("gr:2,5").dim == 6
    assert parse_space("proj:3").dim == 3
    assert parse_space("bgl:2", 6).rank == 2
    with pytest.raises(ParseError):
        parse_space("grass(2,5)")
    with pytest.raises(InputError):
        parse_space("proj:0")


def test_iring_table_gr25(capsys):
    doc = run_json(capsys, "iring", "--space", "gr:2,5", "--table", "--format", "json")
    got = [(r["degree"], r["twist"], r["free_rank"], r["torsion_rank"]) for r in doc["rows"]]
    assert got == [
        (0, 0, 1, 0), (1, 0, 0, 0), (2, 0, 0, 1), (3, 0, 0, 1), (4, 0, 1, 1), (5, 0, 0, 0), (6, 0, 0, 1),
        (0, 1, 0, 0), (1, 1, 0, 1), (2, 1, 1, 0), (3, 1, 0, 1), (4, 1, 0, 1), (5, 1, 0, 1), (6, 1, 1, 0),
    ]


def test_imul_e_eq_vanishes(capsys):
    doc = run_json(capsys, "imul", "--space", "gr:2,4", "--lhs", "e", "--rhs", "eq")
    assert doc["result"]["text"] == "0"
    assert doc["result"]["free"] == [] and doc["result"]["torsion_rho"] == []


def test_cw_degree_zero(capsys):
    doc = run_json(capsys, "cw", "--space", "gr:2,4", "--degree", "0", "--twist", "0")
    assert doc["rows"] == [{"degree": 0, "twist": 0, "group": {"free_rank": 2, "torsion": []}, "text": "Z^2"}]


@pytest.mark.parametrize(
    "argv, code",
    [
        (["imul", "--space", "gr:2,4", "--lhs", "e+", "--rhs", "e"], EXIT_PARSE),
        (["iring", "--space", "gr(2,4)"], EXIT_PARSE),
        (["frobnicate"], EXIT_PARSE),
        ([], EXIT_PARSE),
        (["cw", "--space", "gr:2,4", "--degree", "9"], EXIT_RANGE),
        (["cw", "--space", "gr:2,4", "--twist", "3"], EXIT_RANGE),
        (["cw", "--space", "gr:2,4", "--coefficients", "quadratically-closed"], EXIT_MODEL),
        (["iring", "--space", "gr:2,4", "--coefficients", "p-adic"], EXIT_MODEL),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert main(argv) == code
    assert capsys.readouterr().err


def test_json_roundtrip():
    sp = i_space(parse_space("gr:2,5"), "real")
    for text in ["e", "p1", "t[1]", "b[2]", "e*e"]:
        x = parse_expr(sp, text)
        doc = json.loads(json.dumps(element_to_json(x)))
        assert element_from_json(doc) == x


def test_latex_and_text(capsys):
    assert main(["wring", "--space", "gr:2,4", "--format", "latex"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith(r"\begin{tabular}") and "e, eq & 2 & 1" in out
    assert main(["imul", "--space", "gr:2,4", "--lhs", "e", "--rhs", "e", "--format", "latex"]) == EXIT_OK
    assert capsys.readouterr().out.strip().startswith("$")
    assert main(["sq2", "--space", "gr:2,4", "--class", "c1", "--format", "text"]) == EXIT_OK
    assert "result: s(2) + s(1,1)" in capsys.readouterr().out


def test_sq2_table_bases(capsys):
    doc = run_json(capsys, "sq2-table", "--space", "gr:2,4", "--twist", "0")
    row = next(r for r in doc["rows"] if r["degree"] == 2)
    assert row["image_basis"] == ["s(2) + s(1,1)"]
    assert len(row["kernel_basis"]) == row["kernel"]
    for r in doc["rows"]:
        assert len(r["image_basis"]) == r["image"]


def test_cache(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CWGRASS_CACHE_DIR", str(tmp_path))
    first = run_json(capsys, "cw", "--space", "gr:2,4", "--degree", "2")
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    # a tampered cache entry is served back, proving the cache is read
    files[0].write_text(json.dumps({"verb": "cw", "cached": True}))
    assert run_json(capsys, "cw", "--space", "gr:2,4", "--degree", "2") == {"verb": "cw", "cached": True}
    assert first["rows"]


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "opts.toml"
    cfg.write_text('space = "gr:2,4"\ntwist = 1\nformat = "json"\n')
    doc = run_json(capsys, "cw", "--config", str(cfg), "--degree", "1")
    assert doc["space"] == "gr:2,4" and [r["twist"] for r in doc["rows"]] == [1]
    bad = tmp_path / "bad.toml"
    bad.write_text("space = \n")
    assert main(["cw", "--config", str(bad)]) == EXIT_PARSE


def test_bgl_check_phi(capsys):
    doc = run_json(capsys, "bgl", "--n", "3", "--check-phi", "--max-degree", "8")
    assert doc["passed"] and {c["check"] for c in doc["checks"]} >= {"type3_mod2", "ideal_preserved"}
    doc = run_json(capsys, "bgl", "--space", "bgl:2", "--max-degree", "4", "--twist", "0")
    assert [r["free_rank"] for r in doc["rows"]] == [1, 0, 0, 0, 1]


def test_verify_small(capsys):
    doc = run_json(capsys, "verify", "--max-dim", "4")
    assert doc["passed"]
    assert {r["check"] for r in doc["reports"]} >= {"chow_vs_lr", "euler_mult", "axiom_sweep", "pullback_type_oracle"}


def test_whitespace_in_expressions(capsys):
    doc = run_json(capsys, "imul", "--space", "gr:2,4", "--lhs", "e + eq", "--rhs", "e")
    assert doc["lhs"]["text"] == run_json(capsys, "imul", "--space", "gr:2,4", "--lhs", "e+eq", "--rhs", "e")["lhs"]["text"]
    assert main(["imul", "--space", "gr:2,4", "--lhs", "   ", "--rhs", "e"]) == EXIT_PARSE
