"""One verdict per line: deterministic JSON reports."""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Report:
    claim: str
    instance: str
    verdict: bool | None
    cells: int = 0
    counterexample: object = None
    details: dict = field(default_factory=dict)
    oracle: list = field(default_factory=list)
    timing: float | None = None      # seconds; written only when asked for

    @property
    def failed(self) -> bool:
        return self.verdict is False

    def as_dict(self, timing: bool = False) -> dict:
        out = {
            "claim": self.claim, "instance": self.instance, "verdict": self.verdict,
            "status": {True: "holds", False: "fails", None: "not-applicable"}[self.verdict],
            "cells": self.cells, "counterexample": jsonable(self.counterexample),
            "details": jsonable(self.details), "oracle": list(self.oracle),
        }
        if timing and self.timing is not None:
            out["timing"] = round(self.timing, 3)
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.as_dict(timing), sort_keys=True, ensure_ascii=False)


def jsonable(x):
    """Plain JSON data with a stable order for sets and mapping keys."""
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((jsonable(v) for v in x), key=repr)
    name = getattr(x, "name", None)
    return name if isinstance(name, str) and name else repr(x)


def sort_reports(reports: list[Report]) -> list[Report]:
    return sorted(reports, key=lambda r: (r.claim, r.instance))


def write_reports(reports, stream, timing: bool = False) -> None:
    for r in reports:
        stream.write(r.to_json(timing) + "\n")
