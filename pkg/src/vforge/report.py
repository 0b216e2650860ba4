"""Verdicts and reports produced by probes.

A sampled probe can refute continuity but never prove it, so the verdict
vocabulary keeps the epistemic status explicit:

* :class:`ViolationWitness` -- exact points together with the failed check;
* :class:`NoViolationAtResolution` -- nothing found down to radius ``h``;
* :class:`UndecidedVerdict` -- an oracle hit its depth cutoff.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from .rat import fmt_rat


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return fmt_rat(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


@dataclass(frozen=True)
class ViolationWitness:
    points: tuple
    pattern: Any = None
    check: str = ""
    detail: dict = field(default_factory=dict)

    kind = "violation"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "points": to_jsonable(self.points),
            "pattern": to_jsonable(self.pattern),
            "check": self.check,
            "detail": to_jsonable(self.detail),
        }


@dataclass(frozen=True)
class NoViolationAtResolution:
    h: Fraction
    detail: dict = field(default_factory=dict)

    kind = "no_violation"

    def to_json(self) -> dict:
        return {"kind": self.kind, "resolution": fmt_rat(self.h), "detail": to_jsonable(self.detail)}


@dataclass(frozen=True)
class UndecidedVerdict:
    depth: int
    detail: dict = field(default_factory=dict)

    kind = "undecided"

    def to_json(self) -> dict:
        return {"kind": self.kind, "depth": self.depth, "detail": to_jsonable(self.detail)}


Verdict = Union[ViolationWitness, NoViolationAtResolution, UndecidedVerdict]


@dataclass
class Report:
    construction: str
    probe: str
    params: dict
    verdicts: list
    passed: bool

    @property
    def violations(self) -> list[ViolationWitness]:
        return [v for v in self.verdicts if isinstance(v, ViolationWitness)]

    @property
    def undecided(self) -> list[UndecidedVerdict]:
        return [v for v in self.verdicts if isinstance(v, UndecidedVerdict)]

    def to_json(self) -> dict:
        return {
            "construction": self.construction,
            "probe": self.probe,
            "params": to_jsonable(self.params),
            "verdicts": to_jsonable(self.verdicts),
            "pass": self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
