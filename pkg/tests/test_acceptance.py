from __future__ import annotations

import io

import pytest

from cloakforge import cli
from cloakforge.acceptance import CRITERIA, run_criterion

from conftest import OUTCOMES


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=lambda n: f"criterion{n:02d}")
def test_criterion(number):
    out = run_criterion(number)
    OUTCOMES[number] = out
    print(out.line())
    failing = [(r.claim, r.instance, r.counterexample) for r in out.reports if r.verdict is False][:5]
    assert out.elapsed < out.budget, f"over budget: {out.elapsed:.1f}s > {out.budget}s"
    assert out.passed, failing or out.notes


def test_criterion_details():
    notes = {n: o.notes for n, o in OUTCOMES.items()}
    if len(notes) < len(CRITERIA):
        pytest.skip("needs the criterion runs above")
    assert notes[1]["instances"] == 65
    assert notes[3] == {"monoids": 45, "groups": 5}
    assert notes[4]["adjoint_pairs"] == 34
    assert notes[5]["operators"] == 131
    assert notes[6]["designated_both_false"] is True
    assert notes[7]["max_presheaf_size"] == 12
    assert notes[8]["morphisms"] == 40
    assert notes[9] == {"bundles": 24, "dubuc_pairs": 128}


def test_suite_command_is_deterministic():
    runs = []
    for _ in range(2):
        buf = io.StringIO()
        runs.append((cli.main(["suite"], stdout=buf), buf.getvalue()))
    assert runs[0][0] == 0
    assert runs[0] == runs[1]
