"""Closed-set values in the hyperspace of Y = disjoint union of copies of [0,1].

Copy ``n`` (1-based) carries the identity chart onto ``[0, 1]``; two points in
the same copy are ``|s - t|`` apart and points in different copies are at
distance 1.  Under this metric the copies form a discrete family.

A :class:`Profile` is the closed set ``U_n [0, a_n]`` (one initial segment per
copy) whose level sequence ``a_n`` is eventually constant.  An
:class:`OpenPattern` is the open set ``U_n W_n`` where each ``W_n`` is a finite
union of relatively open subintervals of ``[0, 1]`` and the tail is either a
constant union or a *halo* ``W_n = [0, c + 1/n)``.

Both prefixes are run-length encoded: values produced near the diagonal of
the glued mappings have prefixes with astronomically many copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import LevelOutOfRange, VforgeError
from .rat import ONE, ZERO, fmt_rat, parse_rat

# JSON prefixes spell runs out element by element up to this length.
EXPLICIT_RUN_LIMIT = 16


# --------------------------------------------------------------------------
# run-length helpers


def _compress(runs: Iterable[tuple[object, int]]) -> tuple[tuple[object, int], ...]:
    out: list[tuple[object, int]] = []
    for value, count in runs:
        if count < 0:
            raise VforgeError(f"negative run length {count}")
        if count == 0:
            continue
        if out and out[-1][0] == value:
            out[-1] = (value, out[-1][1] + count)
        else:
            out.append((value, count))
    return tuple(out)


def _strip_tail(runs: tuple, tail) -> tuple:
    while runs and runs[-1][0] == tail:
        runs = runs[:-1]
    return runs


def _runs_length(runs) -> int:
    return sum(c for _, c in runs)


def _value_at(runs, tail, n: int):
    if n < 1:
        raise IndexError(n)
    pos = 0
    for value, count in runs:
        pos += count
        if n <= pos:
            return value
    return tail


def segments(runs_a, tail_a, runs_b, tail_b) -> Iterator[tuple[int, int, object, object]]:
    """Yield ``(first, last, va, vb)`` covering copies ``1..max(len_a, len_b)``.

    Inside each segment both run sequences are constant.
    """
    ia = ib = 0
    left_a = runs_a[0][1] if runs_a else 0
    left_b = runs_b[0][1] if runs_b else 0
    pos = 1
    while ia < len(runs_a) or ib < len(runs_b):
        va = runs_a[ia][0] if ia < len(runs_a) else tail_a
        vb = runs_b[ib][0] if ib < len(runs_b) else tail_b
        if ia < len(runs_a) and ib < len(runs_b):
            step = min(left_a, left_b)
        elif ia < len(runs_a):
            step = left_a
        else:
            step = left_b
        yield pos, pos + step - 1, va, vb
        pos += step
        if ia < len(runs_a):
            left_a -= step
            if left_a == 0:
                ia += 1
                left_a = runs_a[ia][1] if ia < len(runs_a) else 0
        if ib < len(runs_b):
            left_b -= step
            if left_b == 0:
                ib += 1
                left_b = runs_b[ib][1] if ib < len(runs_b) else 0


# --------------------------------------------------------------------------
# profiles


def _check_level(a: Fraction) -> Fraction:
    a = parse_rat(a)
    if a < 0 or a > 1:
        raise LevelOutOfRange(f"level {a} outside [0, 1]")
    return a


@dataclass(frozen=True)
class Profile:
    """The closed set ``U_n [0, a_n]`` with ``a_n = tail`` past the prefix.

    Instances are always canonical: adjacent equal runs are merged and
    trailing runs equal to the tail are dropped, so ``==`` is set equality.
    """

    runs: tuple[tuple[Fraction, int], ...] = ()
    tail: Fraction = ZERO

    def __post_init__(self):
        tail = _check_level(self.tail)
        runs = _compress((_check_level(a), int(c)) for a, c in self.runs)
        object.__setattr__(self, "tail", tail)
        object.__setattr__(self, "runs", _strip_tail(runs, tail))

    @classmethod
    def of(cls, prefix: Sequence = (), tail=ZERO) -> "Profile":
        return cls(tuple((a, 1) for a in prefix), tail)

    @classmethod
    def constant(cls, level) -> "Profile":
        return cls((), level)

    @property
    def prefix_length(self) -> int:
        return _runs_length(self.runs)

    @property
    def prefix(self) -> list[Fraction]:
        out: list[Fraction] = []
        for a, c in self.runs:
            out.extend([a] * c)
        return out

    def level(self, n: int) -> Fraction:
        return _value_at(self.runs, self.tail, n)

    def levels(self) -> set[Fraction]:
        return {a for a, _ in self.runs} | {self.tail}

    def to_json(self) -> dict:
        return {"prefix": _runs_to_json(self.runs, fmt_rat, "level"), "tail": fmt_rat(self.tail)}

    @classmethod
    def from_json(cls, data: dict) -> "Profile":
        try:
            runs = _runs_from_json(data.get("prefix", []), parse_rat, "level")
            return cls(runs, parse_rat(data["tail"]))
        except (KeyError, TypeError, AttributeError) as exc:
            raise VforgeError(f"malformed profile JSON: {data!r}") from exc

    def __str__(self) -> str:
        return f"Profile({[str(a) for a in self.prefix] if self.prefix_length <= 8 else self.runs}, tail={self.tail})"


def _runs_to_json(runs, encode, key: str) -> list:
    out: list = []
    for value, count in runs:
        if count <= EXPLICIT_RUN_LIMIT:
            out.extend([encode(value)] * count)
        else:
            out.append({key: encode(value), "repeat": count})
    return out


def _runs_from_json(items, decode, key: str) -> tuple:
    runs = []
    for item in items:
        if isinstance(item, dict) and "repeat" in item:
            runs.append((decode(item[key]), int(item["repeat"])))
        else:
            runs.append((decode(item), 1))
    return tuple(runs)


def profile_normalize(prefix: Union[Profile, Sequence], tail=None) -> Profile:
    """Canonical profile for a raw ``prefix``/``tail`` pair.

    Raises :class:`LevelOutOfRange` for levels outside ``[0, 1]``.
    """
    if isinstance(prefix, Profile):
        return Profile(prefix.runs, prefix.tail)
    return Profile.of(prefix, ZERO if tail is None else tail)


def profile_subset(a: Profile, b: Profile) -> bool:
    if a.tail > b.tail:
        return False
    return all(la <= lb for _, _, la, lb in segments(a.runs, a.tail, b.runs, b.tail))


def hausdorff_distance(a: Profile, b: Profile) -> Fraction:
    """Hausdorff distance under the ambient metric.

    Every copy is nonempty in both sets and copies are 1 apart, so the
    distance reduces to ``sup_n |a_n - b_n|``.
    """
    best = abs(a.tail - b.tail)
    for _, _, la, lb in segments(a.runs, a.tail, b.runs, b.tail):
        best = max(best, abs(la - lb))
    return best


# --------------------------------------------------------------------------
# open sets


_KINDS = {
    (False, False): "open",
    (True, False): "closed-open",
    (False, True): "open-closed",
    (True, True): "closed",
}
_KIND_FLAGS = {v: k for k, v in _KINDS.items()}


@dataclass(frozen=True, order=True)
class Interval:
    """A nonempty subinterval of [0, 1] that is relatively open in [0, 1]."""

    lo: Fraction
    hi: Fraction
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        lo, hi = parse_rat(self.lo), parse_rat(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (0 <= lo < hi <= 1):
            raise VforgeError(f"interval endpoints must satisfy 0 <= lo < hi <= 1: ({lo}, {hi})")
        if self.lo_closed and lo != 0:
            raise VforgeError("only the endpoint 0 may be included on the left")
        if self.hi_closed and hi != 1:
            raise VforgeError("only the endpoint 1 may be included on the right")

    @classmethod
    def around(cls, center: Fraction, radius: Fraction) -> "Interval":
        """``(center - radius, center + radius)`` intersected with [0, 1]."""
        lo, hi = center - radius, center + radius
        return cls(max(lo, ZERO), min(hi, ONE), lo < 0, hi > 1)

    @classmethod
    def below(cls, bound: Fraction) -> "Interval":
        """``[0, bound)`` intersected with [0, 1]."""
        if bound > 1:
            return cls(ZERO, ONE, True, True)
        return cls(ZERO, bound, True, False)

    def contains(self, s: Fraction) -> bool:
        above = s > self.lo or (self.lo_closed and s == self.lo)
        under = s < self.hi or (self.hi_closed and s == self.hi)
        return above and under

    @property
    def kind(self) -> str:
        return _KINDS[(self.lo_closed, self.hi_closed)]

    def to_json(self) -> list:
        return [fmt_rat(self.lo), fmt_rat(self.hi), self.kind]

    @classmethod
    def from_json(cls, data) -> "Interval":
        lo, hi, kind = data
        if kind not in _KIND_FLAGS:
            raise VforgeError(f"unknown interval kind {kind!r}")
        lc, hc = _KIND_FLAGS[kind]
        return cls(parse_rat(lo), parse_rat(hi), lc, hc)


def _overlaps_or_touches(a: Interval, b: Interval) -> bool:
    # a.lo <= b.lo; union is an interval iff b starts inside a, or they
    # share the endpoint and one side includes it
    if b.lo < a.hi:
        return True
    return b.lo == a.hi and (a.hi_closed or b.lo_closed)


@dataclass(frozen=True)
class OpenIntervalUnion:
    intervals: tuple[Interval, ...] = ()

    def __post_init__(self):
        ivs = sorted(self.intervals, key=lambda i: (i.lo, not i.lo_closed))
        merged: list[Interval] = []
        for iv in ivs:
            if merged and _overlaps_or_touches(merged[-1], iv):
                last = merged[-1]
                if iv.hi > last.hi or (iv.hi == last.hi and iv.hi_closed):
                    merged[-1] = Interval(last.lo, iv.hi, last.lo_closed, iv.hi_closed)
            else:
                merged.append(iv)
        object.__setattr__(self, "intervals", tuple(merged))

    @classmethod
    def whole(cls) -> "OpenIntervalUnion":
        return cls((Interval(ZERO, ONE, True, True),))

    @classmethod
    def empty(cls) -> "OpenIntervalUnion":
        return cls(())

    def contains_point(self, s: Fraction) -> bool:
        return any(iv.contains(s) for iv in self.intervals)

    def contains_segment(self, a: Fraction) -> bool:
        """``[0, a] ⊆ self``."""
        for iv in self.intervals:
            if iv.lo_closed:
                return a < iv.hi or (iv.hi_closed and a <= iv.hi)
        return False

    def meets_segment(self, a: Fraction) -> bool:
        """``[0, a] ∩ self ≠ ∅``."""
        return any(iv.lo_closed or iv.lo < a for iv in self.intervals)

    def to_json(self) -> list:
        return [iv.to_json() for iv in self.intervals]

    @classmethod
    def from_json(cls, data) -> "OpenIntervalUnion":
        return cls(tuple(Interval.from_json(item) for item in data))


@dataclass(frozen=True)
class Constant:
    union: OpenIntervalUnion

    def union_at(self, n: int) -> OpenIntervalUnion:
        return self.union


@dataclass(frozen=True)
class Halo:
    """``W_n = [0, c + 1/n) ∩ [0, 1]``."""

    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", _check_level(self.c))

    def union_at(self, n: int) -> OpenIntervalUnion:
        return OpenIntervalUnion((Interval.below(self.c + Fraction(1, n)),))


TailRule = Union[Constant, Halo]


@dataclass(frozen=True)
class OpenPattern:
    """The open set ``U_n W_n``: explicit (run-length) prefix, then ``tail``."""

    runs: tuple[tuple[OpenIntervalUnion, int], ...] = ()
    tail: TailRule = field(default_factory=lambda: Constant(OpenIntervalUnion.empty()))

    def __post_init__(self):
        object.__setattr__(self, "runs", _compress((u, int(c)) for u, c in self.runs))

    @classmethod
    def of(cls, prefix: Sequence[OpenIntervalUnion] = (), tail: TailRule | None = None) -> "OpenPattern":
        tail = tail if tail is not None else Constant(OpenIntervalUnion.empty())
        return cls(tuple((u, 1) for u in prefix), tail)

    @classmethod
    def single_copy(cls, copy: int, union: OpenIntervalUnion) -> "OpenPattern":
        empty = OpenIntervalUnion.empty()
        return cls(((empty, copy - 1), (union, 1)), Constant(empty))

    @classmethod
    def halo(cls, c) -> "OpenPattern":
        return cls((), Halo(c))

    @property
    def prefix_length(self) -> int:
        return _runs_length(self.runs)

    def union_at(self, n: int) -> OpenIntervalUnion:
        pos = 0
        for u, c in self.runs:
            pos += c
            if n <= pos:
                return u
        return self.tail.union_at(n)

    def to_json(self) -> dict:
        prefix = _runs_to_json(self.runs, lambda u: u.to_json(), "union")
        if isinstance(self.tail, Halo):
            tail = {"halo": fmt_rat(self.tail.c)}
        else:
            tail = {"const": self.tail.union.to_json()}
        return {"prefix": prefix, "tail": tail}

    @classmethod
    def from_json(cls, data: dict) -> "OpenPattern":
        try:
            runs = _runs_from_json(data.get("prefix", []), OpenIntervalUnion.from_json, "union")
            tail = data["tail"]
            if "halo" in tail:
                rule: TailRule = Halo(parse_rat(tail["halo"]))
            else:
                rule = Constant(OpenIntervalUnion.from_json(tail["const"]))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            if isinstance(exc, VforgeError):
                raise
            raise VforgeError(f"malformed pattern JSON: {data!r}") from exc
        return cls(runs, rule)


_TAIL = object()


def _pattern_segments(p: Profile, u: OpenPattern):
    # pattern copies past its prefix are marked with the _TAIL sentinel
    return segments(p.runs, p.tail, u.runs, _TAIL)


def upper_contained(p: Profile, u: OpenPattern) -> bool:
    """``p ⊆ u``, decided exactly (halo tails via their limit rule)."""
    rule = u.tail
    for first, last, a, w in _pattern_segments(p, u):
        if w is _TAIL:
            if isinstance(rule, Halo):
                # worst copy in the segment is the last one
                if not a < rule.c + Fraction(1, last):
                    return False
            elif not rule.union.contains_segment(a):
                return False
        elif not w.contains_segment(a):
            return False
    if isinstance(rule, Halo):
        return p.tail <= rule.c
    return rule.union.contains_segment(p.tail)


def lower_meets(p: Profile, v: OpenPattern) -> bool:
    """``p ∩ v ≠ ∅``."""
    rule = v.tail
    for first, last, a, w in _pattern_segments(p, v):
        if w is _TAIL:
            if isinstance(rule, Halo) or rule.union.meets_segment(a):
                return True
        elif w.meets_segment(a):
            return True
    if isinstance(rule, Halo):
        return True
    return rule.union.meets_segment(p.tail)


# --------------------------------------------------------------------------
# canonical Vietoris neighbourhoods


def _widened(p: Profile, slack: Fraction) -> tuple:
    return tuple((OpenIntervalUnion((Interval.below(a + slack),)), c) for a, c in p.runs)


def _interesting_copies(p: Profile, budget: int) -> list[int]:
    picks: list[int] = []
    pos = 0
    for _, c in p.runs:
        picks.extend([pos + 1, pos + c])
        pos += c
    picks.append(pos + 1)
    picks.extend(range(1, budget + 1))
    seen: list[int] = []
    for k in picks:
        if k not in seen:
            seen.append(k)
        if len(seen) == budget:
            break
    return seen


def vietoris_testopens_for(p: Profile, resolution, budget: int = 8) -> list[tuple[str, OpenPattern]]:
    """Deterministic upper and lower Vietoris test opens around ``p``.

    Upper opens are halos ``Halo(tail + s)`` and constant tails
    ``[0, tail + s)`` with every prefix copy widened to ``[0, a_n + s)``;
    lower opens are single-copy windows of half-width ``resolution`` centred
    on the top ``a_n`` of selected copies.
    """
    r = parse_rat(resolution)
    if r <= 0:
        raise VforgeError("resolution must be positive")
    uppers: list[OpenPattern] = []
    for s in (r, ZERO, 2 * r, 4 * r):
        c = min(p.tail + s, ONE)
        uppers.append(OpenPattern(_widened(p, s if s > 0 else r), Halo(c)))
    for s in (r, 2 * r, 4 * r, 8 * r):
        tail = Constant(OpenIntervalUnion((Interval.below(p.tail + s),)))
        uppers.append(OpenPattern(_widened(p, s), tail))
    lowers = [
        OpenPattern.single_copy(k, OpenIntervalUnion((Interval.around(p.level(k), r),)))
        for k in _interesting_copies(p, budget)
    ]
    return [("upper", u) for u in uppers[:budget]] + [("lower", v) for v in lowers]
