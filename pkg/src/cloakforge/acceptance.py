"""The acceptance grid: ten criteria, each a batch of claim checks with a time budget."""
from __future__ import annotations

import io
import time
from dataclasses import dataclass, field
from typing import Callable

from . import dsl
from . import generators as g
from .claims import CLAIMS, expand, run_check, uses_enumeration
from .report import Report, sort_reports

ORACLE = "monotone-map enumeration"


def claim_reports(claim_id: str, inputs: list[tuple[str, object]]) -> list[Report]:
    """Reports for one claim over every cell its inputs expand to."""
    out = []
    for name, obj in inputs:
        oracle = [ORACLE] if uses_enumeration(claim_id, obj) else []
        for inst_name, inst in expand(CLAIMS[claim_id], obj, name):
            t = time.perf_counter()
            v = run_check(claim_id, inst)
            out.append(Report(claim_id, inst_name, v.holds, v.cells, v.counterexample, v.details, oracle,
                              time.perf_counter() - t))
    return out


def _cells(claim_ids, inputs_by_kind: Callable[[str], list]) -> list[Report]:
    out = []
    for cid in claim_ids:
        out += claim_reports(cid, inputs_by_kind(cid))
    return out


def _lattices():
    return [(L.name, L) for L in g.heyting_lattices(5)]


def _shared(kind: str, ids: tuple[str, ...]) -> list[Report]:
    """Expand each lattice once into cells of ``kind`` and run every claim on those cells."""
    out = []
    for name, L in _lattices():
        cells = expand(CLAIMS[ids[0]], L, name)
        for cid in ids:
            assert CLAIMS[cid].kind == kind
            for inst_name, inst in cells:
                t = time.perf_counter()
                v = run_check(cid, inst)
                out.append(Report(cid, inst_name, v.holds, v.cells, v.counterexample, v.details, [ORACLE],
                                  time.perf_counter() - t))
    return out


@dataclass
class Outcome:
    number: int
    title: str
    budget: float
    passed: bool
    elapsed: float
    reports: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:>2} {mark}  {self.elapsed:7.2f}s / {self.budget:.0f}s  {self.title}"

    def summary(self) -> Report:
        fails = [r for r in self.reports if r.verdict is False]
        return Report(f"criterion-{self.number:02d}", self.title, self.passed, len(self.reports),
                      {"claim": fails[0].claim, "instance": fails[0].instance} if fails else None,
                      dict(self.notes, budget_s=self.budget), [], self.elapsed)


def _all_hold(reports) -> bool:
    return bool(reports) and all(r.verdict is not False for r in reports)


def c1_heyting_grid():
    rs = _shared("comonad", ("L2.4", "L2.5", "L3.5", "L3.8", "P3.9"))
    ok = _all_hold(rs) and all(r.verdict is True for r in rs)
    return ok, rs, {"instances": len(rs) // 5}


def c2_cofree_reduction():
    rs = _shared("comonad", ("P3.3",))
    return _all_hold(rs) and all(r.verdict is True for r in rs), rs, {"instances": len(rs)}


def c3_monoids():
    ms = g.monoids_upto(4)
    rs = claim_reports("EX4", [(f"monoid{k}", H) for k, H in enumerate(ms)])
    groups = sum(1 for r in rs if r.details.get("group"))
    return _all_hold(rs), rs, {"monoids": len(ms), "groups": groups}


def c4_adjoint_pairs():
    rs = claim_reports("P4.2", _lattices())
    applicable = [r for r in rs if r.verdict is not None]
    return _all_hold(rs) and bool(applicable), rs, {"adjoint_pairs": len(applicable)}


def c5_em_isos():
    rs = claim_reports("EX5.3", _lattices())
    return _all_hold(rs) and all(r.verdict is True for r in rs), rs, {"operators": len(rs)}


def c6_fusion_coherence():
    rs = _shared("procomonad", ("P5.8", "C5.9", "T5.12"))
    designated = [r for r in rs if r.claim == "T5.12" and r.instance == "diamond/g_meet_a_*"]
    both_false = bool(designated) and designated[0].verdict is True and any(
        not v["hopf"] and v["creates"] is False for v in designated[0].details["per_algebra"].values())
    ok = _all_hold(rs) and all(r.verdict is True for r in rs) and both_false
    return ok, rs, {"designated_both_false": both_false}


def c7_presheaf_layer():
    rs = claim_reports("P5.6", _lattices()) + _shared("procomonad", ("L5.11",))
    sizes = {r.details.get("test_presheaves") for r in rs if r.claim == "L5.11"}
    return (_all_hold(rs) and all(r.verdict is True for r in rs), rs,
            {"test_presheaf_counts": sorted(s for s in sizes if s), "max_presheaf_size": 12})


def c8_mnd():
    ms = g.mnd_suite()
    rs = _cells(("A1", "A2", "A3", "A4", "A5"), lambda cid: [(m.name, m) for m in ms])
    core = [r for r in rs if r.claim != "A5"]
    ok = len(ms) >= 20 and _all_hold(rs) and all(r.verdict is True for r in core)
    return ok, rs, {"morphisms": len(ms), "a5_applicable": sum(1 for r in rs if r.claim == "A5" and r.verdict)}


def c9_liftings():
    bs = g.bundle_suite()
    ds = g.dubuc_suite()
    rs = _cells(("B1", "B2", "B3"), lambda cid: [(b.name, b) for b in bs])
    rd = claim_reports("DUBUC", [(d.name, d) for d in ds])
    no_fails = all(r.details.get("verdict") != "fails" for r in rd)
    ok = len(bs) >= 20 and all(r.verdict is True for r in rs) and no_fails and _all_hold(rd)
    return ok, rs + rd, {"bundles": len(bs), "dubuc_pairs": len(ds)}


def c10_infrastructure():
    rs = []
    for path in dsl.corpus_files():
        text = path.read_text(encoding="utf-8")
        docs = dsl.parse_documents(text)
        again = dsl.serialize(docs if len(docs) > 1 else docs[0])
        rs.append(Report("ROUNDTRIP", path.name, again == text, len(docs)))
    from .cli import main
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        code = main(["hopf", str(dsl.CORPUS_DIR / "diamond-g-meet-a.json"), "--at", "a"], stdout=buf)
        outs.append((code, buf.getvalue()))
    rs.append(Report("DETERMINISM", "hopf diamond-g-meet-a --at a", outs[0][1] == outs[1][1], 2,
                     details={"exit_codes": [c for c, _ in outs]}))
    return _all_hold(rs) and all(r.verdict for r in rs), rs, {"corpus_files": len(rs) - 1}


CRITERIA: list[tuple[int, str, float, Callable]] = [
    (1, "Heyting grid: equalizer, cofree, transported pair, creation", 60, c1_heyting_grid),
    (2, "cofree coalgebras decide Hopf", 30, c2_cofree_reduction),
    (3, "monoids of order at most 4: Hopf iff group", 60, c3_monoids),
    (4, "adjoint closure/interior pairs transfer fusion invertibility", 60, c4_adjoint_pairs),
    (5, "procomonad algebras are Eilenberg-Moore categories", 30, c5_em_isos),
    (6, "coend fusion coherence and the creation theorem", 120, c6_fusion_coherence),
    (7, "presheaf cloaks, Day products and barred Hopf", 120, c7_presheaf_layer),
    (8, "monad morphisms: doctrinal adjunction and local equivalence", 60, c8_mnd),
    (9, "right liftings and the adjoint triangle", 120, c9_liftings),
    (10, "corpus round-trip and deterministic reports", 60, c10_infrastructure),
]


def run_criterion(number: int) -> Outcome:
    n, title, budget, fn = next(c for c in CRITERIA if c[0] == number)
    t = time.perf_counter()
    ok, reports, notes = fn()
    elapsed = time.perf_counter() - t
    return Outcome(n, title, budget, ok and elapsed < budget, elapsed, sort_reports(reports), notes)
