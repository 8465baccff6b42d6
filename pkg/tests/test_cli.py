from __future__ import annotations

import io
import json

from cloakforge import cli, dsl

CORPUS = dsl.CORPUS_DIR


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main([str(a) for a in argv], stdout=out, stderr=err)
    return code, [json.loads(line) for line in out.getvalue().splitlines()], err.getvalue()


def test_cloak_in_chain3():
    code, [r], _ = run("cloak", CORPUS / "chain3.json", "--by", "m", "--of", "0")
    assert code == 0
    assert r["verdict"] is True and r["details"]["hom_obj"] == "0"


def test_hopf_at_a_on_the_diamond_fails():
    code, [r], _ = run("hopf", CORPUS / "diamond-g-meet-a.json", "--at", "a")
    assert code == 1
    assert r["verdict"] is False
    assert r["counterexample"] == {"X": "b", "Z": "0"}
    assert {"X": "1", "Z": "b"} not in r["details"]["failing_cells"]


def test_hopf_g_drop_m_holds():
    code, [r], _ = run("hopf", CORPUS / "chain3-g-drop-m.json")
    assert code == 0 and r["verdict"] is True


def test_hopf_of_a_group():
    code, [r], _ = run("hopf", CORPUS / "z3.json")
    assert code == 0 and r["details"]["group"] is True


def test_fusion_wood_cell():
    code, [r], _ = run("fusion", CORPUS / "chain3-g-drop-m.json", "--coalgebra", "1", "--at", "0")
    assert code == 0 and r["details"]["kind"] == "wood" and r["details"]["invertible"]


def test_validate_every_corpus_file():
    for path in dsl.corpus_files():
        code, rs, _ = run("validate", path)
        assert code == 0 and all(r["verdict"] for r in rs), path.name


def test_validate_reports_position(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"kind": "poset",\n "name": "p" "payload": {}}', encoding="utf-8")
    code, [r], _ = run("validate", f)
    assert code == 1
    assert r["counterexample"]["line"] == 2 and r["counterexample"]["column"] == 14


def test_verify_on_a_recipe():
    code, rs, _ = run("verify", "L2.4", "recipe:heyting-chain(3)")
    assert code == 0 and len(rs) == 4
    assert all(r["oracle"] == ["monotone-map enumeration"] for r in rs)


def test_verify_claim_that_does_not_apply():
    code, rs, err = run("verify", "EX4", "recipe:diamond")
    assert code == 2 and rs == [] and "does not apply" in err


def test_usage_errors_exit_2():
    assert run("bogus")[0] == 2
    code, _, err = run("cloak", CORPUS / "chain3.json", "--by", "q", "--of", "0")
    assert code == 2 and "unknown object 'q'" in err
    assert run("validate", "/no/such/file.json")[0] == 2


def test_timing_is_opt_in():
    _, [plain], _ = run("cloak", CORPUS / "chain3.json", "--by", "m", "--of", "0")
    _, [timed], _ = run("--timing", "cloak", CORPUS / "chain3.json", "--by", "m", "--of", "0")
    assert "timing" not in plain and isinstance(timed["timing"], float)


def test_suite_single_criterion():
    code, rs, _ = run("suite", "--criteria", "10")
    assert code == 0
    assert rs[-1]["claim"] == "criterion-10" and rs[-1]["verdict"] is True


def test_suite_rejects_unknown_criterion():
    assert run("suite", "--criteria", "11")[0] == 2
