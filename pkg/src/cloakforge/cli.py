"""Command-line driver: JSON-lines reports, exit 0 when everything holds, 1 on a failure, 2 on misuse."""
from __future__ import annotations

import argparse
import sys
import time

from . import dsl
from .claims import CLAIMS, instance_kind
from .em import build_em, build_em_monad
from .errors import CloakforgeError, DocumentError, UnknownRecipe
from .fusion import FiniteMonoid, hopf_wood_check, is_group, monoid_hopf, t_fusion, wood_fusion
from .magmal import MagmalCategory, MagmalComonad, OpmagmalMonad
from .procomonad import Procomonad, build_gamma_algebras, gamma_from, gamma_fusion, hopf_at, thiebaud_iso
from .report import Report, sort_reports, write_reports


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cloakforge", description="Check cloak, fusion and Hopf claims on finite instances.")
    p.add_argument("--timing", action="store_true", help="add a timing field to every report")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="parse, resolve and validate a document")
    v.add_argument("file")

    c = sub.add_parser("cloak", help="the cloak [Y,Z] in a magmal category")
    c.add_argument("file")
    c.add_argument("--by", required=True, metavar="Y")
    c.add_argument("--of", required=True, metavar="Z")
    c.add_argument("--instance")

    f = sub.add_parser("fusion", help="one fusion morphism")
    f.add_argument("file")
    f.add_argument("--coalgebra", required=True, metavar="Y[:STRUCTURE]")
    f.add_argument("--at", required=True, metavar="Z")
    f.add_argument("--kind", choices=("wood", "t", "gamma"))
    f.add_argument("--instance")

    h = sub.add_parser("hopf", help="Hopf verdict, optionally at one (co)algebra")
    h.add_argument("file")
    h.add_argument("--at", metavar="Y[:STRUCTURE]")
    h.add_argument("--instance")

    r = sub.add_parser("verify", help="check one claim on a document or recipe:NAME(ARGS)")
    r.add_argument("claim", choices=sorted(CLAIMS))
    r.add_argument("input")

    s = sub.add_parser("suite", help="run the acceptance grid")
    s.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    return p


def _select(items, kinds, wanted: str | None):
    usable = [(n, o) for n, o in items if instance_kind(o) in kinds]
    if wanted is not None:
        for n, o in items:
            if n == wanted:
                if instance_kind(o) not in kinds:
                    raise UsageError(f"instance {wanted!r} is a {instance_kind(o)}, need {' or '.join(kinds)}")
                return n, o
        raise UsageError(f"no instance named {wanted!r}")
    if not usable:
        raise UsageError(f"no {' or '.join(kinds)} instance in the input")
    return usable[-1]


def _obj(B, name: str) -> int:
    try:
        return B.objects.index(name)
    except ValueError:
        raise UsageError(f"unknown object {name!r}; objects are {', '.join(B.objects)}") from None


def _pick(structures, B, spec: str, label) -> int:
    """Index of the structure whose carrier (and label, when given) match ``Y[:label]``."""
    carrier, _, lab = spec.partition(":")
    y = _obj(B, carrier)
    hits = [i for i, (c, s) in enumerate(structures) if c == y and (not lab or label(s) == lab)]
    if not hits:
        raise UsageError(f"no (co)algebra on {carrier!r}" + (f" with structure {lab!r}" if lab else ""))
    if len(hits) > 1:
        opts = ", ".join(f"{carrier}:{label(structures[i][1])}" for i in hits)
        raise UsageError(f"several (co)algebras on {carrier!r}; choose one of {opts}")
    return hits[0]


def _elem(x) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(_elem(v) for v in x) + ")"
    return str(x)


def cmd_validate(args) -> list[Report]:
    try:
        docs = dsl.parse_documents(open(args.file, encoding="utf-8").read())
    except DocumentError as e:
        return [Report("validate", args.file, False, 0,
                       {"error": type(e).__name__, "message": str(e), "line": e.line, "column": e.col})]
    return [Report("validate", d.name, True, 1, details={"kind": d.kind}) for d in docs]


def cmd_cloak(args) -> list[Report]:
    name, obj = _select(dsl.load_input(args.file), ("magmal", "comonad", "monad"), args.instance)
    C = obj if isinstance(obj, MagmalCategory) else obj.C
    B = C.base
    y, z = _obj(B, args.by), _obj(B, args.of)
    cl = C.cloak(y, z)
    if cl is None:
        return [Report("cloak", name, False, 1, {"Y": args.by, "Z": args.of}, {"exists": False})]
    return [Report("cloak", name, True, 1, None, {
        "Y": args.by, "Z": args.of, "exists": True, "hom_obj": B.objects[cl.hom_obj],
        "ev": B.mor_names[cl.ev]})]


def _as_procomonad(obj) -> Procomonad:
    return obj if isinstance(obj, Procomonad) else gamma_from(obj)


def cmd_fusion(args) -> list[Report]:
    name, obj = _select(dsl.load_input(args.file), ("comonad", "monad", "procomonad"), args.instance)
    kind = args.kind or {"comonad": "wood", "monad": "t", "procomonad": "gamma"}[instance_kind(obj)]
    if kind == "wood":
        if not isinstance(obj, MagmalComonad):
            raise UsageError("Wood fusion needs a comonad")
        B = obj.base
        em = build_em(obj)
        i = _pick(em.structures, B, args.coalgebra, lambda s: B.mor_names[s])
        y, ups = em.structures[i]
        w = wood_fusion(obj, y, ups, _obj(B, args.at))
        return [Report("fusion", name, w.invertible, 1, None if w.invertible else {"Y": args.coalgebra, "Z": args.at}, {
            "kind": "wood", "source": B.objects[w.source], "target": B.objects[w.target],
            "morphism": B.mor_names[w.mor], "invertible": w.invertible})]
    if kind == "t":
        if not isinstance(obj, OpmagmalMonad):
            raise UsageError("T-fusion needs a monad")
        B = obj.base
        em = build_em_monad(obj)
        i = _pick(em.structures, B, args.coalgebra, lambda s: B.mor_names[s])
        y, beta = em.structures[i]
        v = t_fusion(obj, _obj(B, args.at), y, beta)
        return [Report("fusion", name, v.invertible, 1, None if v.invertible else {"X": args.at, "Y": args.coalgebra}, {
            "kind": "t", "source": B.objects[v.source], "target": B.objects[v.target],
            "morphism": B.mor_names[v.mor], "invertible": v.invertible})]
    P = _as_procomonad(obj)
    B = P.C
    alg = build_gamma_algebras(P)
    ya = alg.structures[_pick(alg.structures, B, args.coalgebra, _elem)]
    z = _obj(B, args.at)
    per_x = {B.objects[x]: gamma_fusion(P, x, ya, z, "coend").is_bijective() for x in B.obj_ids()}
    bad = [x for x, ok in per_x.items() if not ok]
    return [Report("fusion", name, not bad, len(per_x), {"X": bad[0], "Z": args.at} if bad else None,
                   {"kind": "gamma", "invertible_at": per_x})]


def _hopf_comonad(name, G: MagmalComonad, at: str | None) -> list[Report]:
    B = G.base
    em = build_em(G)
    if at is None:
        r = hopf_wood_check(G, "all-coalgebras", em)
        ce = {"Y": r.counterexample[0], "Z": r.counterexample[1]} if r.counterexample else None
        return [Report("hopf", name, r.hopf, r.cells, ce, {"route": "wood, all coalgebras"})]
    i = _pick(em.structures, B, at, lambda s: B.mor_names[s])
    y, ups = em.structures[i]
    P = gamma_from(G)
    alg = build_gamma_algebras(P)
    iso = thiebaud_iso(alg, em)
    if iso is None:
        raise CloakforgeError("procomonad algebras do not match the coalgebras")
    ya = alg.structures[iso[0].index(i)]
    hopf, witness = hopf_at(P, ya)
    failing = [{"X": B.objects[x], "Z": B.objects[z]} for x in B.obj_ids() for z in B.obj_ids()
               if not gamma_fusion(P, x, ya, z, "coend").is_bijective()]
    wood = {B.objects[z]: wood_fusion(G, y, ups, z).invertible for z in B.obj_ids()}
    ce = {"X": B.objects[witness[0]], "Z": B.objects[witness[1]]} if witness else None
    return [Report("hopf", name, hopf, B.n_obj ** 2, ce, {
        "coalgebra": f"({B.objects[y]},{B.mor_names[ups]})", "failing_cells": failing,
        "wood_invertible_at": wood, "route": "procomonad fusion at (Y,υ)"})]


def _hopf_monad(name, T: OpmagmalMonad, at: str | None) -> list[Report]:
    B = T.base
    em = build_em_monad(T)
    idx = range(len(em.structures)) if at is None else [_pick(em.structures, B, at, lambda s: B.mor_names[s])]
    cells, first = 0, None
    for i in idx:
        y, beta = em.structures[i]
        for x in B.obj_ids():
            cells += 1
            if first is None and not t_fusion(T, x, y, beta).invertible:
                first = {"X": B.objects[x], "Y": f"({B.objects[y]},{B.mor_names[beta]})"}
    return [Report("hopf", name, first is None, cells, first, {"route": "t-fusion"})]


def _hopf_procomonad(name, P: Procomonad, at: str | None) -> list[Report]:
    B = P.C
    alg = build_gamma_algebras(P)
    idx = range(len(alg.structures)) if at is None else [_pick(alg.structures, B, at, _elem)]
    out = []
    for i in idx:
        ya = alg.structures[i]
        hopf, w = hopf_at(P, ya)
        inst = f"{name}@({B.objects[ya[0]]},{_elem(ya[1])})"
        out.append(Report("hopf", inst, hopf, B.n_obj ** 2,
                          {"X": B.objects[w[0]], "Z": B.objects[w[1]]} if w else None, {"route": "procomonad"}))
    return out


def cmd_hopf(args) -> list[Report]:
    name, obj = _select(dsl.load_input(args.file), ("comonad", "monad", "procomonad", "monoid"), args.instance)
    if isinstance(obj, MagmalComonad):
        return _hopf_comonad(name, obj, args.at)
    if isinstance(obj, OpmagmalMonad):
        return _hopf_monad(name, obj, args.at)
    if isinstance(obj, FiniteMonoid):
        hopf, _ = monoid_hopf(obj)
        return [Report("hopf", name, hopf, 1, None, {"group": is_group(obj), "route": "monoid fusion"})]
    return _hopf_procomonad(name, obj, args.at)


def cmd_verify(args) -> list[Report]:
    from .acceptance import claim_reports
    items = dsl.load_input(args.input)
    reports = claim_reports(args.claim, items)
    if not reports:
        kinds = sorted({instance_kind(o) for _, o in items})
        raise UsageError(f"{args.claim} does not apply to {', '.join(kinds) or 'an empty input'}")
    return reports


def cmd_suite(args, stdout) -> int:
    from .acceptance import CRITERIA, run_criterion
    numbers = [c[0] for c in CRITERIA]
    if args.criteria:
        try:
            numbers = [int(x) for x in args.criteria.split(",")]
        except ValueError:
            raise UsageError("--criteria takes comma-separated numbers") from None
        unknown = set(numbers) - {c[0] for c in CRITERIA}
        if unknown:
            raise UsageError(f"unknown criterion {sorted(unknown)[0]}")
    ok = True
    for n in numbers:
        out = run_criterion(n)
        write_reports(out.reports + [out.summary()], stdout, args.timing)
        ok = ok and out.passed
    return 0 if ok else 1


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.command == "suite":
            return cmd_suite(args, stdout)
        t = time.perf_counter()
        reports = {"validate": cmd_validate, "cloak": cmd_cloak, "fusion": cmd_fusion,
                   "hopf": cmd_hopf, "verify": cmd_verify}[args.command](args)
    except (UsageError, DocumentError, UnknownRecipe, FileNotFoundError, IsADirectoryError) as e:
        stderr.write(f"cloakforge: error: {e}\n")
        return 2
    except CloakforgeError as e:
        stderr.write(f"cloakforge: {type(e).__name__}: {e}\n")
        return 1
    if args.command != "verify":
        elapsed = time.perf_counter() - t
        for r in reports:
            r.timing = elapsed
    write_reports(sort_reports(reports), stdout, args.timing)
    return 1 if any(r.failed for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())
