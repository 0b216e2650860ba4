"""Certification engine: exact discontinuity witnesses and sampled probes.

Probes search deterministic sample sets.  For every radius ``h`` the samples
are ``x0 ± o`` for the 16 dyadic offsets ``o`` in ``h/2, h/4, 3h/4, h/8, ...,
h/32``; points outside the mapping's domain are skipped.  A violation is
reported only when every radius of the schedule contains one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional, Sequence

from .equiconnect import FanPoint, fan_distance
from .errors import DomainError, SequenceOutOfRegion, Undecided
from .gallery import LatticeSet
from .gluing import GluedMapping, MappingFamily, eval_glued
from .hyperspace import (
    OpenPattern,
    Profile,
    hausdorff_distance,
    lower_meets,
    upper_contained,
    vietoris_testopens_for,
)
from .rat import ONE, ZERO, fmt_rat, parse_rat
from .report import NoViolationAtResolution, Report, UndecidedVerdict, ViolationWitness

DEFAULT_BUDGET = 8
DEFAULT_RESOLUTION = Fraction(1, 16)


def dyadic_offsets(h: Fraction) -> list[Fraction]:
    out = []
    den = 2
    while len(out) < 15:
        out.extend(h * Fraction(k, den) for k in range(1, den, 2))
        den *= 2
    out.append(h / 32)
    return out


def sample_points(x0: Fraction, h: Fraction) -> list[Fraction]:
    pts = []
    for o in dyadic_offsets(h):
        pts.extend((x0 + o, x0 - o))
    return pts


# --------------------------------------------------------------------------
# test opens


@dataclass(frozen=True)
class PatternOpen:
    kind: str
    pattern: OpenPattern

    def holds(self, value: Profile) -> bool:
        if self.kind == "upper":
            return upper_contained(value, self.pattern)
        return lower_meets(value, self.pattern)

    def to_json(self) -> dict:
        return {"kind": self.kind, "pattern": self.pattern.to_json()}


@dataclass(frozen=True)
class Ball:
    """Open ball; for single points the upper and lower conditions coincide."""

    kind: str
    center: Any
    radius: Fraction

    def holds(self, value) -> bool:
        if isinstance(self.center, FanPoint):
            return fan_distance(value, self.center) < self.radius
        return abs(value - self.center) < self.radius

    def to_json(self) -> dict:
        center = self.center.to_json() if hasattr(self.center, "to_json") else fmt_rat(self.center)
        return {"kind": self.kind, "ball": {"center": center, "radius": fmt_rat(self.radius)}}


def _lattice_gap(e: Fraction, base: Fraction) -> Fraction:
    """Distance from ``e`` to ``{base + k : k >= 1}``."""
    d = e - base
    k = d.numerator // d.denominator
    return min(abs(d - max(1, k)), abs(d - max(1, k + 1)))


@dataclass(frozen=True)
class LatticeThickening:
    """``U_{k>=1} (base + k - radius, base + k + radius)``; an upper open."""

    base: Fraction
    radius: Fraction
    kind: str = "upper"

    def holds(self, value: LatticeSet) -> bool:
        # both bases lie in [0, 1], so from k = 2 on every element has the same gap
        if value.count is None:
            delta = value.base - self.base
            frac = delta - (delta.numerator // delta.denominator)
            if min(frac, 1 - frac) >= self.radius:
                return False
        return all(_lattice_gap(e, self.base) < self.radius for e in value.elements(3))

    def to_json(self) -> dict:
        return {"kind": self.kind, "thickening": {"base": fmt_rat(self.base), "radius": fmt_rat(self.radius)}}


@dataclass(frozen=True)
class Window:
    """The open interval ``(center - radius, center + radius)`` of the line; a lower open."""

    center: Fraction
    radius: Fraction
    kind: str = "lower"

    def holds(self, value: LatticeSet) -> bool:
        lo = self.center - self.radius - value.base
        # smallest k >= 1 with base + k > center - radius
        k = max(1, lo.numerator // lo.denominator + 1)
        if value.count is not None and k > value.count:
            return False
        return value.base + k < self.center + self.radius

    def to_json(self) -> dict:
        return {"kind": self.kind, "window": {"center": fmt_rat(self.center), "radius": fmt_rat(self.radius)}}


def test_opens(value, resolution=DEFAULT_RESOLUTION, budget: int = DEFAULT_BUDGET) -> list:
    """Upper and lower test opens around a value of any supported carrier."""
    r = parse_rat(resolution)
    if isinstance(value, Profile):
        return [PatternOpen(kind, p) for kind, p in vietoris_testopens_for(value, r, budget)]
    if isinstance(value, LatticeSet):
        uppers = [LatticeThickening(value.base, r * 2**j) for j in range(budget)]
        lowers = [Window(value.base + k, r) for k in range(1, budget + 1)]
        return uppers + lowers
    radii = [r * 2**j for j in range(budget)]
    return [Ball("upper", value, s) for s in radii] + [Ball("lower", value, s) for s in radii]


def _as_test_open(u, kind: str):
    if isinstance(u, OpenPattern):
        return PatternOpen(kind, u)
    return u


# --------------------------------------------------------------------------
# one-variable probes


def _probe(fn: Callable, x0, test, schedule: Sequence) -> NoViolationAtResolution | ViolationWitness | UndecidedVerdict:
    x0 = parse_rat(x0)
    schedule = [parse_rat(h) for h in schedule]
    if not schedule or any(h <= 0 for h in schedule):
        raise ValueError("schedule must hold positive radii")
    if not test.holds(fn(x0)):
        raise ValueError(f"base value at {x0} does not satisfy the test open")
    witnesses: dict[Fraction, Fraction] = {}
    # the smallest radius decides a pass, so it is searched first
    for h in sorted(schedule):
        found = None
        for x in sample_points(x0, h):
            try:
                value = fn(x)
            except DomainError:
                continue
            except Undecided as exc:
                return UndecidedVerdict(exc.depth, detail={"point": x})
            if not test.holds(value):
                found = x
                break
        if found is None:
            return NoViolationAtResolution(min(schedule), detail={"open": test})
        witnesses[h] = found
    points = tuple(witnesses[h] for h in schedule)
    return ViolationWitness(points=points, pattern=test, check=f"{test.kind} membership", detail={"schedule": schedule})


def upper_probe(fn: Callable, x0, u, schedule: Sequence):
    return _probe(fn, x0, _as_test_open(u, "upper"), schedule)


def lower_probe(fn: Callable, x0, v, schedule: Sequence):
    return _probe(fn, x0, _as_test_open(v, "lower"), schedule)


def separate_schedule(resolution: Fraction, steps: int = 20) -> list[Fraction]:
    """Radii ``8r, 4r, ..., r / 2**(steps-4)``."""
    return [resolution * Fraction(8) / 2**j for j in range(steps)]


def separate_probe(
    m: GluedMapping,
    x0,
    y0,
    axis: str,
    resolution=DEFAULT_RESOLUTION,
    budget: int = DEFAULT_BUDGET,
) -> Report:
    x0, y0, r = parse_rat(x0), parse_rat(y0), parse_rat(resolution)
    if axis == "x":
        fn, along = (lambda s: eval_glued(m, s, y0)), x0
    elif axis == "y":
        fn, along = (lambda s: eval_glued(m, x0, s)), y0
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    schedule = separate_schedule(r)
    verdicts = [_probe(fn, along, test, schedule) for test in test_opens(fn(along), r, budget)]
    passed = all(isinstance(v, NoViolationAtResolution) for v in verdicts)
    return Report(
        construction=m.name,
        probe="separate",
        params={"x0": x0, "y0": y0, "axis": axis, "resolution": r, "budget": budget},
        verdicts=verdicts,
        passed=passed,
    )


# --------------------------------------------------------------------------
# the diagonal


@dataclass(frozen=True)
class InitialSegment:
    """``(0, hi]`` or ``(0, hi)`` inside (0, 1)."""

    hi: Fraction
    hi_closed: bool

    def __contains__(self, x) -> bool:
        return 0 < x < self.hi or (self.hi_closed and x == self.hi)

    def __str__(self) -> str:
        return f"(0, {self.hi}{']' if self.hi_closed else ')'}"

    def to_json(self) -> dict:
        return {"lo": "0", "hi": fmt_rat(self.hi), "lo_closed": False, "hi_closed": self.hi_closed}


def diagonal_preimage_exact(x0, c=None) -> tuple[InitialSegment, bool]:
    """``{x in (0, 1) : g(x) ⊆ Halo(c)}`` for the thm diagonal, and whether it
    is a neighbourhood of ``x0``.  ``c`` defaults to ``x0``.
    """
    from .gallery import thm_g

    x0 = parse_rat(x0)
    thm_g(x0)
    c = x0 if c is None else parse_rat(c)
    halo = OpenPattern.halo(c)
    # g(x) has an empty prefix, so only the halo tail rule applies and the
    # preimage is an initial segment ending at c
    if c >= 1:
        seg = InitialSegment(ONE, False)
    else:
        seg = InitialSegment(c, upper_contained(thm_g(c), halo)) if c > 0 else InitialSegment(ZERO, False)
    return seg, x0 < seg.hi


def diagonal_schedule(m: GluedMapping, x0: Fraction, steps: int = 8) -> list[Fraction]:
    room = min(Fraction(1, 4), x0 - m.domain.lo, m.domain.hi - x0)
    return [room / 2**j for j in range(steps)]


def joint_diagonal_witness(m: GluedMapping, x0, schedule: Optional[Sequence] = None, resolution=DEFAULT_RESOLUTION):
    """Probe ``x -> f(x, x)`` at ``x0`` against halo-type upper opens."""
    x0 = parse_rat(x0)
    if not (m.domain.lo < x0 < m.domain.hi):
        raise DomainError(f"{x0} is not interior to {m.domain}")
    schedule = list(schedule) if schedule is not None else diagonal_schedule(m, x0)

    def diag(s):
        return eval_glued(m, s, s)

    value = diag(x0)
    if isinstance(value, Profile):
        tests = [PatternOpen("upper", OpenPattern.halo(value.tail))]
    else:
        tests = test_opens(value, resolution)
    tightest = None
    for test in tests:
        verdict = _probe(diag, x0, test, schedule)
        if not isinstance(verdict, NoViolationAtResolution):
            return verdict
        tightest = tightest or verdict
    return tightest


# --------------------------------------------------------------------------
# convergence


def _eventual_index(values: Sequence, test) -> Optional[int]:
    """Smallest ``N`` with ``values[n-1]`` inside ``test`` for every ``n >= N``."""
    n_ok = None
    for n in range(len(values), 0, -1):
        if test.holds(values[n - 1]):
            n_ok = n
        else:
            break
    return n_ok


def _eventual_report(name, probe, params, values, tests, depth) -> Report:
    verdicts = []
    for test in tests:
        n = _eventual_index(values, test)
        if n is None:
            verdicts.append(UndecidedVerdict(depth, detail={"open": test}))
        else:
            verdicts.append(NoViolationAtResolution(params["resolution"], detail={"open": test, "N": n}))
    return Report(
        construction=name,
        probe=probe,
        params=params,
        verdicts=verdicts,
        passed=all(isinstance(v, NoViolationAtResolution) for v in verdicts),
    )


def entry_indices(report: Report) -> list[Optional[int]]:
    return [v.detail.get("N") if isinstance(v, NoViolationAtResolution) else None for v in report.verdicts]


def convergence_probe(
    family: MappingFamily,
    x,
    testopens: Optional[Iterable] = None,
    depth: int = 200,
    resolution=DEFAULT_RESOLUTION,
) -> Report:
    x, r = parse_rat(x), parse_rat(resolution)
    limit = family.g(x)
    tests = list(testopens) if testopens is not None else test_opens(limit, r)
    for test in tests:
        if not test.holds(limit):
            raise ValueError(f"test open {test.to_json()} does not fit g({x})")
    values = [family.gn(n, x) for n in range(1, depth + 1)]
    params = {"x": x, "depth": depth, "resolution": r}
    return _eventual_report(family.name, "convergence", params, values, tests, depth)


def condition3_probe(
    m: GluedMapping,
    x,
    sequences: Callable[[int], tuple],
    testopens: Optional[Iterable] = None,
    depth: int = 200,
    resolution=DEFAULT_RESOLUTION,
) -> Report:
    """Check that ``lam(g_n(x_n), g_{n+1}(x_n), t_n)`` eventually enters every
    test open around ``g(x)``, for ``(x_n, t_n) = sequences(n)`` with
    ``(x_n, x) in F_{n-1}``.
    """
    x, r = parse_rat(x), parse_rat(resolution)
    limit = m.family.g(x)
    tests = list(testopens) if testopens is not None else test_opens(limit, r)
    gn, lam, s = m.family.gn, m.connector, m.scaffold
    values = []
    for n in range(1, depth + 1):
        xn, tn = sequences(n)
        xn, tn = parse_rat(xn), parse_rat(tn)
        if xn not in m.domain or not s.member_f(n - 1, xn, x):
            raise SequenceOutOfRegion(f"x_{n} = {xn} violates (x_n, x) in F_{n - 1}")
        values.append(lam(gn(n, xn), gn(n + 1, xn), tn))
    params = {"x": x, "depth": depth, "resolution": r}
    return _eventual_report(m.name, "condition3", params, values, tests, depth)


# --------------------------------------------------------------------------
# Hausdorff negative control


def value_distance(a, b) -> Fraction:
    if isinstance(a, Profile):
        return hausdorff_distance(a, b)
    if isinstance(a, FanPoint):
        return fan_distance(a, b)
    return abs(a - b)


def hausdorff_gap(m: GluedMapping, x, y) -> Fraction:
    """Distance between ``f(x, y)`` and the diagonal value ``f(x, x)``."""
    return value_distance(eval_glued(m, x, y), eval_glued(m, x, x))
