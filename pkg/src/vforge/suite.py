"""The acceptance battery.

Each criterion is a function ``criterion_N(seed) -> CriterionResult``.  All
sampling goes through ``random.Random(seed)`` so reruns are byte-identical.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .equiconnect import (
    FAN,
    FAN_FIXED_SPLIT,
    LINEAR,
    ORIGIN,
    PROFILE,
    FanPoint,
    axioms_check,
    continuity_probe_lambda,
    sample_triples,
)
from .gallery import assemble, family, thm_g, thm_gn
from .gluing import glue_identity_check, scaffold_bandwidth, validate_nesting
from .gluing import validate_phi
from .hyperspace import Profile, hausdorff_distance, profile_subset
from .lab import (
    Ball,
    InitialSegment,
    convergence_probe,
    diagonal_preimage_exact,
    entry_indices,
    hausdorff_gap,
    joint_diagonal_witness,
    separate_probe,
)
from .report import NoViolationAtResolution, Report, ViolationWitness

DEFAULT_SEED = 20240601


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    reports: list = field(default_factory=list)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} [{self.number:2d}] {self.title}: {self.summary}"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "pass": self.passed,
            "summary": self.summary,
            "reports": [r.to_json() for r in self.reports],
        }


def _rat(rng: random.Random, max_den: int, lo_open=True, hi_open=True) -> Fraction:
    while True:
        q = rng.randint(2, max_den)
        x = Fraction(rng.randint(0, q), q)
        if (lo_open and x == 0) or (hi_open and x == 1):
            continue
        return x


def _unit_points(rng, count, closed: bool, max_den=997) -> list[Fraction]:
    pts = [Fraction(0), Fraction(1)] if closed else []
    while len(pts) < count:
        pts.append(_rat(rng, max_den, not closed, not closed))
    return pts


# --------------------------------------------------------------------------


def criterion_1(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = random.Random(seed)
    failures = []
    for name in ("thm", "remark", "baire"):
        m = assemble(name)
        closed = m.domain.lo_closed
        for x in _unit_points(rng, 1000, closed):
            if m(x, x) != m.family.g(x):
                failures.append((name, x))
    return CriterionResult(1, "diagonal exactness", not failures, f"3 x 1000 points, {len(failures)} failures")


def criterion_2(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = random.Random(seed + 2)
    m = assemble("thm")
    bad_pre, bad_witness = [], []
    reports = []
    for x0 in _unit_points(rng, 200, closed=False):
        seg, nbhd = diagonal_preimage_exact(x0)
        if seg != InitialSegment(x0, True) or nbhd:
            bad_pre.append(x0)
        verdict = joint_diagonal_witness(m, x0)
        if not isinstance(verdict, ViolationWitness):
            bad_witness.append(x0)
        elif len(reports) < 3:
            reports.append(Report("thm", "joint-diagonal", {"x0": x0}, [verdict], True))
    ok = not bad_pre and not bad_witness
    return CriterionResult(
        2,
        "everywhere-discontinuous diagonal",
        ok,
        f"200 points, preimage mismatches {len(bad_pre)}, missing witnesses {len(bad_witness)}",
        reports,
    )


def separate_points(rng: random.Random, name: str, count: int) -> list[tuple[Fraction, Fraction]]:
    """Half diagonal points, half off-diagonal at assorted distances."""
    m = assemble(name)
    closed = m.domain.lo_closed
    pts = []
    while len(pts) < count:
        x = _rat(rng, 97, not closed, not closed)
        if len(pts) % 2 == 0:
            pts.append((x, x))
            continue
        y = x + (1 if rng.random() < 0.5 else -1) * Fraction(1, rng.randint(2, 60))
        if y in m.domain:
            pts.append((x, y))
    return pts


def separate_resolution(i: int) -> Fraction:
    """Cycles 2^-5 .. 2^-20."""
    return Fraction(1, 2 ** (5 + i % 16))


def criterion_3(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = random.Random(seed + 3)
    violations = 0
    probes = 0
    reports = []
    for name in ("thm", "remark"):
        m = assemble(name)
        for i, (x, y) in enumerate(separate_points(rng, name, 50)):
            for axis in ("x", "y"):
                rep = separate_probe(m, x, y, axis, separate_resolution(i))
                probes += 1
                violations += len(rep.violations) + len(rep.undecided)
                if not rep.passed or len(reports) < 2:
                    reports.append(rep)
    return CriterionResult(
        3,
        "separate continuity evidence",
        violations == 0,
        f"{probes} probes (resolutions 2^-5..2^-20), {violations} violations",
        reports,
    )


def region_samples(rng: random.Random, name: str, count: int) -> list[tuple[int, Fraction, Fraction]]:
    """``(n, x, y)`` with ``(x, y)`` in ``F_{n-1} \\ F_{n+1}``."""
    m = assemble(name)
    closed = m.domain.lo_closed
    out = []
    while len(out) < count:
        x = _rat(rng, 97, not closed, not closed)
        k = rng.randint(1, 60)
        d = Fraction(1, k) * (1 + Fraction(rng.randint(0, 9), 10 * k))
        y = x + d if rng.random() < 0.5 else x - d
        if y not in m.domain or y == x:
            continue
        n = m.scaffold.exit_index(x, y)
        choices = [c for c in (n - 1, n) if c >= 1]
        out.append((rng.choice(choices), x, y))
    return out


def criterion_4(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = random.Random(seed + 4)
    failures = []
    for name in ("thm", "remark", "baire"):
        m = assemble(name)
        for n, x, y in region_samples(rng, name, 200):
            if not glue_identity_check(m, n, x, y):
                failures.append((name, n, x, y))
    return CriterionResult(4, "gluing identity", not failures, f"3 x 200 region points, {len(failures)} failures")


def scaffold_samples(rng: random.Random, count: int) -> list[tuple[Fraction, Fraction]]:
    pts = []
    for i in range(count):
        x = _rat(rng, 60, False, False)
        if i % 10 == 0:
            pts.append((x, x))
        elif i % 3 == 0:
            pts.append((x, _rat(rng, 60, False, False)))
        else:
            d = Fraction(1, rng.randint(2, 40))
            pts.append((x, min(Fraction(1), x + d)))
    return pts


def criterion_5(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = random.Random(seed + 5)
    samples = scaffold_samples(rng, 500)
    reports = []
    for s in (scaffold_bandwidth(), assemble("baire").scaffold):
        reports.append(validate_nesting(s, samples, 20))
        reports.append(validate_phi(s, samples, 20))
    ok = all(r.passed for r in reports)
    names = ", ".join(f"{r.construction}/{r.probe}={'ok' if r.passed else 'FAIL'}" for r in reports)
    return CriterionResult(5, "scaffold contracts", ok, f"500 samples, depth 20: {names}", reports)


def criterion_6(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = random.Random(seed + 6)
    failures = []
    checked = 0
    while checked < 500:
        n = rng.randint(1, 40)
        x = _rat(rng, 97)
        d = Fraction(rng.randint(0, 100), 100 * (n + 2))
        y = x + d if rng.random() < 0.5 else x - d
        if not 0 < y < 1:
            continue
        checked += 1
        if not profile_subset(thm_gn(n, x), thm_g(y)):
            failures.append((n, x, y))
    return CriterionResult(6, "subset lemma", not failures, f"500 samples, {len(failures)} failures")


CONVERGENCE_DEPTH = 200
CONVERGENCE_RESOLUTION = Fraction(1, 16)


def convergence_points(rng: random.Random, name: str, count: int) -> list[Fraction]:
    """Sample points whose convergence is visible by depth 200 at resolution 1/16.

    Convergence is pointwise, so points arbitrarily close to the seams need
    arbitrarily large depth; those bands are left out.
    """
    excluded = {
        "fan": (Fraction(9, 20), Fraction(1, 2)),
        "remark": (Fraction(19, 20), Fraction(1)),
    }
    lo_open = name == "thm"
    pts = [] if name == "thm" else [Fraction(0), Fraction(1)]
    while len(pts) < count:
        x = _rat(rng, 40, lo_open, lo_open)
        band = excluded.get(name)
        if band and band[0] < x < band[1]:
            continue
        if x not in pts:
            pts.append(x)
    return pts


def criterion_7(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = random.Random(seed + 7)
    failures = []
    reports = []
    for name in ("thm", "remark", "fan", "lattice"):
        fam = family(name)
        for x in convergence_points(rng, name, 20):
            rep = convergence_probe(fam, x, depth=CONVERGENCE_DEPTH, resolution=CONVERGENCE_RESOLUTION)
            if not rep.passed:
                failures.append((name, x))
                reports.append(rep)
    fan_rep = convergence_probe(family("fan"), 0, [Ball("upper", FanPoint(0, 1), Fraction(1, 10))])
    reports.append(fan_rep)
    fan_n = entry_indices(fan_rep)[0]
    ok = not failures and fan_n == 11
    return CriterionResult(
        7,
        "pointwise convergence",
        ok,
        f"4 families x 20 points, depth 200, {len(failures)} undecided; fan x=0 radius 1/10 -> N={fan_n}",
        reports,
    )


def criterion_8(seed: int = DEFAULT_SEED) -> CriterionResult:
    reports = [
        axioms_check(PROFILE, sample_triples(PROFILE, 500, seed)),
        axioms_check(LINEAR, sample_triples(LINEAR, 500, seed)),
        axioms_check(FAN, sample_triples(FAN, 500, seed)),
    ]
    schedule = [Fraction(1, 4), Fraction(1, 16), Fraction(1, 64), Fraction(1, 256)]
    fan_bases = [
        (FanPoint(1, 2), ORIGIN, Fraction(1, 2)),
        (FanPoint(1, 2), FanPoint(1, 1), Fraction(1, 3)),
        (FanPoint(-1, -3), FanPoint(2, 2), Fraction(3, 4)),
        (ORIGIN, FanPoint(1, 5), Fraction(1, 5)),
    ]
    fan_verdicts = [continuity_probe_lambda(FAN, b, schedule) for b in fan_bases]
    control = continuity_probe_lambda(FAN_FIXED_SPLIT, fan_bases[0], schedule)
    profile_verdict = continuity_probe_lambda(
        PROFILE, (Profile.of([Fraction(1, 6)]), Profile.of([Fraction(1, 3)]), Fraction(1, 2)), schedule
    )
    reports.append(Report("fan", "lambda-continuity", {"schedule": schedule}, fan_verdicts,
                          all(isinstance(v, NoViolationAtResolution) for v in fan_verdicts)))
    reports.append(Report("fan-fixed-split", "lambda-continuity", {"schedule": schedule}, [control],
                          isinstance(control, ViolationWitness)))
    reports.append(Report("profile", "lambda-continuity", {"schedule": schedule}, [profile_verdict],
                          isinstance(profile_verdict, NoViolationAtResolution)))
    ok = all(r.passed for r in reports)
    return CriterionResult(
        8,
        "equiconnection axioms",
        ok,
        "axioms profile/linear/fan x500: "
        + "/".join("ok" if r.passed else "FAIL" for r in reports[:3])
        + f"; fan continuity {'ok' if reports[3].passed else 'FAIL'}"
        + f"; fixed-split control {'flagged' if reports[4].passed else 'NOT flagged'}",
        reports,
    )


def gap_points(rng: random.Random, count: int) -> list[tuple[Fraction, Fraction]]:
    pts = []
    while len(pts) < count:
        x = _rat(rng, 97)
        d = Fraction(rng.randint(1, 250), 1000)
        y = x + d if rng.random() < 0.5 else x - d
        if 0 < y < 1:
            pts.append((x, y))
    return pts


def criterion_9(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = random.Random(seed + 9)
    m = assemble("thm")
    gap_fail, probe_fail, dh_fail = [], [], []
    for x, y in gap_points(rng, 100):
        if hausdorff_gap(m, x, y) != x:
            gap_fail.append((x, y))
        for axis in ("x", "y"):
            if not separate_probe(m, x, y, axis, Fraction(1, 2**10)).passed:
                probe_fail.append((x, y, axis))
    for _ in range(100):
        x, y = _rat(rng, 97), _rat(rng, 97)
        if hausdorff_distance(thm_g(x), thm_g(y)) != abs(x - y):
            dh_fail.append((x, y))
    ok = not (gap_fail or probe_fail or dh_fail)
    return CriterionResult(
        9,
        "Vietoris/Hausdorff split",
        ok,
        f"gap=x failures {len(gap_fail)}/100, Vietoris violations {len(probe_fail)}/200, "
        f"d_H(g(x),g(y))=|x-y| failures {len(dh_fail)}/100",
    )


def determinism_bundle(seed: int = DEFAULT_SEED) -> str:
    """Serialised reports of every probe kind plus a grid, for rerun comparison."""
    from .cli import emit_grid

    rng = random.Random(seed + 10)
    thm = assemble("thm")
    parts = []
    for x, y in separate_points(rng, "thm", 6):
        parts.append(separate_probe(thm, x, y, "y", Fraction(1, 2**12)).to_json())
    for x0 in _unit_points(rng, 4, closed=False):
        parts.append(Report("thm", "joint-diagonal", {"x0": x0}, [joint_diagonal_witness(thm, x0)], True).to_json())
    for name in ("thm", "remark", "fan", "lattice"):
        for x in convergence_points(rng, name, 3):
            parts.append(convergence_probe(family(name), x).to_json())
    parts.append(axioms_check(FAN, sample_triples(FAN, 50, seed)).to_json())
    parts.append(emit_grid(thm, (Fraction(1, 4), Fraction(3, 4)), (Fraction(1, 4), Fraction(3, 4)), Fraction(1, 8)))
    parts.append(emit_grid(assemble("baire"), (Fraction(0), Fraction(1)), (Fraction(0), Fraction(1)), Fraction(1, 2)))
    return json.dumps(parts, sort_keys=True, separators=(",", ":"))


def criterion_10(seed: int = DEFAULT_SEED) -> CriterionResult:
    first = determinism_bundle(seed)
    second = determinism_bundle(seed)
    ok = first == second
    return CriterionResult(10, "determinism", ok, f"bundle of {len(first)} bytes, identical={ok}")


CRITERIA: dict[int, Callable[[int], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run_suite(seed: int = DEFAULT_SEED, only=None) -> list[CriterionResult]:
    return [CRITERIA[k](seed) for k in sorted(CRITERIA) if only is None or k in only]
