"""Equiconnecting maps ``lam(u, v, t)`` and their axiom suite.

Three carriers are provided:

``profile``
    tail-0 profiles, blended copy by copy: level ``(1-t) a_n + t b_n``.
``linear``
    the real line with ``(1-t) u + t v``.
``fan``
    the union of the lines ``y = n x`` (``n >= 1``) in the plane.  Points on
    different lines are joined by a broken path through the origin; the time
    spent on the first leg is ``|u| / (|u| + |v|)`` in the max norm.

Axioms checked: closure of the carrier, ``lam(u, v, 0) = lam(v, u, 1) = u``
and ``lam(u, u, t) = u``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence

from .errors import DomainError, NotInCarrier
from .hyperspace import Profile, hausdorff_distance, segments
from .rat import ONE, ZERO, clamp01, fmt_rat, parse_rat
from .report import NoViolationAtResolution, Report, ViolationWitness


def _check_t(t) -> Fraction:
    t = parse_rat(t)
    if not 0 <= t <= 1:
        raise DomainError(f"t = {t} outside [0, 1]")
    return t


# --------------------------------------------------------------------------
# profiles


def lambda_profile(u: Profile, v: Profile, t) -> Profile:
    t = _check_t(t)
    if u == v:
        return u
    if u.tail != 0 or v.tail != 0:
        raise DomainError("profile connector is defined on tail-0 profiles and on the diagonal only")
    if t == 0:
        return u
    if t == 1:
        return v
    s = ONE - t
    runs = tuple(
        (s * a + t * b, last - first + 1)
        for first, last, a, b in segments(u.runs, ZERO, v.runs, ZERO)
    )
    return Profile(runs, ZERO)


def lambda_linear(u, v, t) -> Fraction:
    t = _check_t(t)
    return (ONE - t) * parse_rat(u) + t * parse_rat(v)


# --------------------------------------------------------------------------
# the fan


@dataclass(frozen=True)
class FanPoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", parse_rat(self.x))
        object.__setattr__(self, "y", parse_rat(self.y))

    @property
    def line(self) -> int | None:
        """Slope ``n`` of the fan line through the point; ``None`` for the origin
        or for points off the fan."""
        if self.x == 0:
            return None
        q = self.y / self.x
        if q.denominator == 1 and q >= 1:
            return int(q)
        return None

    def in_fan(self) -> bool:
        if self.x == 0:
            return self.y == 0
        return self.line is not None

    def norm(self) -> Fraction:
        return max(abs(self.x), abs(self.y))

    def scale(self, c: Fraction) -> "FanPoint":
        return FanPoint(c * self.x, c * self.y)

    def to_json(self) -> dict:
        return {"x": fmt_rat(self.x), "y": fmt_rat(self.y)}

    @classmethod
    def from_json(cls, data: dict) -> "FanPoint":
        return cls(parse_rat(data["x"]), parse_rat(data["y"]))


ORIGIN = FanPoint(ZERO, ZERO)


def fan_distance(a: FanPoint, b: FanPoint) -> Fraction:
    return max(abs(a.x - b.x), abs(a.y - b.y))


def _fan_lambda(u: FanPoint, v: FanPoint, t, split: Callable[[FanPoint, FanPoint], Fraction]) -> FanPoint:
    if not u.in_fan():
        raise NotInCarrier(f"{u} is not on a fan line")
    if not v.in_fan():
        raise NotInCarrier(f"{v} is not on a fan line")
    t = _check_t(t)
    if u == ORIGIN or v == ORIGIN or u.line == v.line:
        return FanPoint((ONE - t) * u.x + t * v.x, (ONE - t) * u.y + t * v.y)
    s = split(u, v)
    if t <= s:
        return u.scale(ONE - t / s)
    return v.scale((t - s) / (ONE - s))


def _norm_split(u: FanPoint, v: FanPoint) -> Fraction:
    return u.norm() / (u.norm() + v.norm())


def lambda_fan(u: FanPoint, v: FanPoint, t) -> FanPoint:
    return _fan_lambda(u, v, t, _norm_split)


def lambda_fan_fixed_split(u: FanPoint, v: FanPoint, t) -> FanPoint:
    """Broken path with the midpoint split; discontinuous as ``v`` -> origin."""
    return _fan_lambda(u, v, t, lambda u, v: Fraction(1, 2))


# --------------------------------------------------------------------------
# connectors


def _perturb_profile(p: Profile, h: Fraction) -> list[Profile]:
    out = [p]
    if p.tail != 0:
        return out
    for sign in (1, -1):
        out.append(Profile(tuple((clamp01(a + sign * h), c) for a, c in p.runs), ZERO))
        for i in range(len(p.runs)):
            runs = list(p.runs)
            a, c = runs[i]
            runs[i] = (clamp01(a + sign * h), c)
            out.append(Profile(tuple(runs), ZERO))
    out.append(Profile(p.runs + ((h, 1),), ZERO))
    return out


def _perturb_scalar(x: Fraction, h: Fraction) -> list[Fraction]:
    return [x, x + h, x - h]


def _perturb_fan(p: FanPoint, h: Fraction) -> list[FanPoint]:
    out = [p]
    if p == ORIGIN:
        for m in (1, 2, 3, 5):
            out.append(FanPoint(h / m, h))
            out.append(FanPoint(-h / m, -h))
        return out
    n = p.line
    e = h / n
    out.append(FanPoint(p.x + e, p.y + n * e))
    out.append(FanPoint(p.x - e, p.y - n * e))
    return out


@dataclass(frozen=True)
class Connector:
    name: str
    carrier: str
    apply: Callable[[Any, Any, Fraction], Any]
    member: Callable[[Any], bool]
    distance: Callable[[Any, Any], Fraction]
    perturb: Callable[[Any, Fraction], list]

    def __call__(self, u, v, t):
        return self.apply(u, v, t)


def _is_z1_profile(p) -> bool:
    return isinstance(p, Profile) and p.tail == 0


PROFILE = Connector("profile", "profile", lambda_profile, _is_z1_profile, hausdorff_distance, _perturb_profile)
LINEAR = Connector(
    "linear", "scalar", lambda_linear, lambda x: isinstance(x, Fraction), lambda a, b: abs(a - b), _perturb_scalar
)
FAN = Connector(
    "fan", "fan", lambda_fan, lambda p: isinstance(p, FanPoint) and p.in_fan(), fan_distance, _perturb_fan
)
FAN_FIXED_SPLIT = Connector(
    "fan-fixed-split", "fan", lambda_fan_fixed_split, FAN.member, fan_distance, _perturb_fan
)

CONNECTORS = {c.name: c for c in (PROFILE, LINEAR, FAN, FAN_FIXED_SPLIT)}


def get_connector(name: str) -> Connector:
    try:
        return CONNECTORS[name]
    except KeyError:
        raise KeyError(f"unknown connector {name!r}; choose from {sorted(CONNECTORS)}") from None


# --------------------------------------------------------------------------
# sampling


def _rand_rat(rng: random.Random, lo: int, hi: int, den: int) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def _rand_element(carrier: str, rng: random.Random):
    if carrier == "profile":
        prefix = [_rand_rat(rng, 0, 1, 12) for _ in range(rng.randint(0, 4))]
        return Profile.of(prefix, ZERO)
    if carrier == "scalar":
        return _rand_rat(rng, -2, 2, 24)
    if carrier == "fan":
        if rng.random() < 0.1:
            return ORIGIN
        n = rng.randint(1, 5)
        x = _rand_rat(rng, -2, 2, 6)
        return FanPoint(x, n * x)
    raise ValueError(carrier)


def sample_triples(connector: Connector, count: int, seed: int = 0) -> list[tuple[Any, Any, Fraction]]:
    """Deterministic ``(u, v, t)`` samples from the connector's domain.

    About a third of fan pairs share a line; the rest mostly do not.
    """
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        u = _rand_element(connector.carrier, rng)
        if connector.carrier == "fan" and u != ORIGIN and rng.random() < 1 / 3:
            x = _rand_rat(rng, -2, 2, 6)
            v = FanPoint(x, u.line * x)
        else:
            v = _rand_element(connector.carrier, rng)
        out.append((u, v, _rand_rat(rng, 0, 1, 12)))
    return out


# --------------------------------------------------------------------------
# checks


def axioms_check(c: Connector, samples: Sequence[tuple[Any, Any, Fraction]]) -> Report:
    verdicts = []
    for u, v, t in samples:
        failure = None
        w = c(u, v, t)
        if not c.member(w):
            failure = ("i", (u, v, t), w)
        elif c(u, v, ZERO) != u:
            failure = ("ii", (u, v, ZERO), c(u, v, ZERO))
        elif c(v, u, ONE) != u:
            failure = ("ii", (v, u, ONE), c(v, u, ONE))
        elif c(u, u, t) != u:
            failure = ("iii", (u, u, t), c(u, u, t))
        if failure is not None:
            axiom, args, got = failure
            verdicts.append(ViolationWitness(points=args, check=f"axiom ({axiom})", detail={"got": got}))
            break
    return Report(
        construction=c.name,
        probe="axioms",
        params={"samples": len(samples)},
        verdicts=verdicts,
        passed=not verdicts,
    )


def continuity_probe_lambda(c: Connector, base: tuple, schedule: Sequence) -> NoViolationAtResolution | ViolationWitness:
    """Look for non-shrinking output displacement as the input radius shrinks.

    For each radius ``h`` the inputs are perturbed by at most ``h`` and the
    largest output displacement ``D(h)`` is recorded.  A violation is
    reported when ``D`` at the last radius is still at least half of ``D`` at
    the first one.
    """
    schedule = [parse_rat(h) for h in schedule]
    if len(schedule) < 2 or any(h <= 0 for h in schedule) or schedule != sorted(schedule, reverse=True):
        raise ValueError("schedule must hold at least two strictly decreasing positive radii")
    u0, v0, t0 = base
    w0 = c(u0, v0, t0)
    displacements = []
    worst_point = None
    for h in schedule:
        ts = [t for t in (t0, t0 + h, t0 - h) if 0 <= t <= 1]
        worst = ZERO
        worst_point = (u0, v0, t0)
        for u in c.perturb(u0, h):
            for v in c.perturb(v0, h):
                for t in ts:
                    d = c.distance(c(u, v, t), w0)
                    if d > worst:
                        worst, worst_point = d, (u, v, t)
        displacements.append(worst)
    first, last = displacements[0], displacements[-1]
    detail = {"displacements": displacements, "schedule": schedule}
    if last > 0 and 2 * last >= first:
        return ViolationWitness(points=(base, worst_point), check="displacement does not shrink", detail=detail)
    return NoViolationAtResolution(schedule[-1], detail=detail)
