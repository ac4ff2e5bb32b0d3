import json
from fractions import Fraction

import pytest

from daggerdist.cli import main, resolve_group, run_suites
from daggerdist.groups import builtin_heisenberg, group_to_config
from daggerdist.padic import LogMag
from daggerdist.report import CheckRecord, Report, emit_json, emit_text, render


def test_resolve_group_tags():
    assert resolve_group("heisenberg(3)").name == "heisenberg(3)"
    G = resolve_group("abelian(5,2)")
    assert (G.p, G.d) == (5, 2)


def test_resolve_group_from_config_file(tmp_path):
    path = tmp_path / "group.json"
    path.write_text(json.dumps(group_to_config(builtin_heisenberg(3))))
    assert resolve_group(str(path)).multiply([1, 1, 0], [0, 0, 1]) == (1, 1, 1)


def test_render_normalizes_exact_values():
    assert render(Fraction(1, 3)) == "1/3"
    assert render(LogMag(Fraction(-2, 5))) == "p^-2/5"
    assert render(LogMag.bottom()) == "0"
    assert render({"b": Fraction(1), "a": 2}) == {"a": 2, "b": "1/1"}


def test_report_json_fields():
    rep = Report(group="g", seed=1)
    rep.extend(
        [
            CheckRecord(
                check_id="x/y",
                anchor="something holds",
                verdict="pass",
                params={"N": 2, "tau": Fraction(1, 4)},
            )
        ]
    )
    data = json.loads(emit_json(rep))
    assert data["schema"] == 1
    assert data["counts"]["pass"] == 1
    assert data["checks"][0]["params"]["tau"] == "1/4"


def test_empty_suites_empty_report_exit_zero(tmp_path, capsys):
    out = tmp_path / "r.json"
    rc = main(["verify", "--group", "heisenberg(3)", "--suites", "", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["checks"] == []
    rc = main(
        ["verify", "--group", "heisenberg(3)", "--suites", "coeff-bound", "--out", str(out)]
    )
    assert rc == 0


def test_unknown_suite_rejected():
    with pytest.raises(SystemExit):
        main(["verify", "--suites", "nonsense"])


def test_corrupted_config_fails_with_witness(tmp_path):
    cfg = group_to_config(builtin_heisenberg(3))
    cfg["F"][2] = [rec for rec in cfg["F"][2] if sum(rec["index"]) == 1]
    cfg["model"] = None
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / "rep.json"
    rc = main(
        ["verify", "--group", str(path), "--suites", "group-axioms", "--out", str(out)]
    )
    assert rc == 1
    data = json.loads(out.read_text())
    failing = [r for r in data["checks"] if r["verdict"] == "fail"]
    assert failing and all("witness" in r for r in failing)
    assert all("index" in r["witness"] for r in failing)


def test_json_determinism_small(tmp_path):
    args = [
        "verify",
        "--group",
        "abelian(3,2)",
        "--suites",
        "group-axioms,polydisc,norms",
        "--N",
        "1..4",
        "--trials",
        "10",
        "--seed",
        "3",
    ]
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_text_format_includes_anchor(tmp_path):
    out = tmp_path / "r.txt"
    rc = main(
        [
            "verify",
            "--group",
            "heisenberg(3)",
            "--suites",
            "coeff-bound",
            "--format",
            "text",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    text = out.read_text()
    assert "valuation bound" in text
    assert "totals:" in text


def test_run_suites_soundness_of_verdicts():
    G = builtin_heisenberg(3)
    rep = run_suites(
        G,
        ["norms"],
        n_range=[1, 2],
        sigmas=[Fraction(1, 2)],
        cap=3,
        trials=10,
        seed=5,
    )
    # truncated-norm inequalities must not claim a full pass
    for rec in rep.records:
        if rec.check_id in ("norms/st-submultiplicative", "norms/banach-submultiplicative"):
            assert rec.verdict in ("lower-bound-pass", "fail", "regime-unmet")


def test_describe_group_and_convert(tmp_path, capsys):
    rc = main(["describe-group", "--group", "heisenberg(3)"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["p"] == 3 and "neighborhoods" in data

    payload = {
        "dim": 1,
        "cap": 3,
        "terms": [{"index": [3], "coeff": "1/1"}],
    }
    src = tmp_path / "poly.json"
    src.write_text(json.dumps(payload))
    mid = tmp_path / "mahler.json"
    rc = main(["convert", "--direction", "taylor-to-mahler", "--in", str(src), "--out", str(mid)])
    assert rc == 0
    back = tmp_path / "taylor.json"
    rc = main(["convert", "--direction", "mahler-to-taylor", "--in", str(mid), "--out", str(back)])
    assert rc == 0
    assert json.loads(back.read_text())["terms"] == payload["terms"]


def test_emit_text_matches_json_verdicts():
    rep = Report(group="g", seed=0)
    rep.extend([CheckRecord(check_id="a/b", anchor="anchor text", verdict="pass")])
    text = emit_text(rep).decode()
    assert "anchor text" in text and "PASS" in text
