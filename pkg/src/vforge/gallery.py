"""Catalogue of the concrete constructions.

``thm``
    closed-valued map on (0, 1): ``g(x)`` is the profile with every level
    ``x``; ``g_n(x)`` raises the first ``n`` copies to ``x - 1/(n+1)``.
``remark``
    the same idea on [0, 1], with ``g(1)`` collapsed to the base points and
    ``g_n`` folded back to zero before ``x = n/(n+1)``.
``fan``
    maps into the lines ``y = n x`` converging to the two apex points
    ``(0, 1)`` and ``(0, -1)``.
``lattice``
    ``g_n(x) = {x + k : 1 <= k <= n}`` converging to ``{x + k : k >= 1}``.
``baire``
    scalar powers ``x**n`` converging to the indicator of ``{1}``.

Only ``thm``, ``remark`` and ``baire`` are glued into two-variable maps; the
fan and lattice limits are diagonals of no separately continuous map, so
they are exposed for convergence checks only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .equiconnect import LINEAR, PROFILE, FanPoint
from .errors import DomainError, UnknownConstruction
from .gluing import (
    CLOSED_UNIT,
    OPEN_UNIT,
    GluedMapping,
    MappingFamily,
    scaffold_bandwidth,
    scaffold_metric,
)
from .hyperspace import Profile
from .rat import ONE, ZERO, fmt_rat, parse_rat

ZERO_PROFILE = Profile((), ZERO)


def _check_n(n: int) -> int:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"index n must be a positive integer, got {n!r}")
    return n


def _in_open_unit(x) -> Fraction:
    x = parse_rat(x)
    if not 0 < x < 1:
        raise DomainError(f"{x} outside (0, 1)")
    return x


def _in_closed_unit(x) -> Fraction:
    x = parse_rat(x)
    if not 0 <= x <= 1:
        raise DomainError(f"{x} outside [0, 1]")
    return x


# --------------------------------------------------------------------------
# thm


def thm_g(x) -> Profile:
    return Profile((), _in_open_unit(x))


def thm_gn(n: int, x) -> Profile:
    n, x = _check_n(n), _in_open_unit(x)
    cut = Fraction(1, n + 1)
    if x <= cut:
        return ZERO_PROFILE
    return Profile(((x - cut, n),), ZERO)


# --------------------------------------------------------------------------
# remark


def remark_g(x) -> Profile:
    x = _in_closed_unit(x)
    return ZERO_PROFILE if x == 1 else Profile((), x)


def remark_gn(n: int, x) -> Profile:
    n, x = _check_n(n), _in_closed_unit(x)
    # x = 0 joins the first branch, which is printed for (0, 1/(n+1)] only
    if x <= Fraction(1, n + 1) or x >= Fraction(n, n + 1):
        return ZERO_PROFILE
    if x < Fraction(n * n + 1, (n + 1) ** 2):
        level = x - Fraction(1, n + 1)
    else:
        level = -n * x + Fraction(n * n, n + 1)
    return Profile(((level, n),), ZERO)


# --------------------------------------------------------------------------
# fan


def fan_g(x) -> FanPoint:
    x = _in_closed_unit(x)
    return FanPoint(ZERO, ONE) if x < Fraction(1, 2) else FanPoint(ZERO, -ONE)


def fan_gn(n: int, x) -> FanPoint:
    n, x = _check_n(n), _in_closed_unit(x)
    if x <= Fraction(n - 1, 2 * n):
        return FanPoint(Fraction(1, n), ONE)
    if x <= Fraction(1, 2):
        return FanPoint(-4 * x + Fraction(2 * n - 1, n), -4 * n * x + 2 * n - 1)
    return FanPoint(Fraction(-1, n), -ONE)


# --------------------------------------------------------------------------
# lattice


@dataclass(frozen=True)
class LatticeSet:
    """``{base + k : 1 <= k <= count}``, or ``{base + k : k >= 1}`` when ``count`` is None."""

    base: Fraction
    count: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "base", _in_closed_unit(self.base))
        if self.count is not None and self.count < 1:
            raise DomainError("finite lattice sets need at least one point")

    @property
    def infinite(self) -> bool:
        return self.count is None

    def elements(self, limit: Optional[int] = None) -> list[Fraction]:
        top = self.count if self.count is not None else limit
        if top is None:
            raise ValueError("an infinite lattice set needs an explicit limit")
        if limit is not None:
            top = min(top, limit)
        return [self.base + k for k in range(1, top + 1)]

    def __contains__(self, e) -> bool:
        k = parse_rat(e) - self.base
        return k.denominator == 1 and k >= 1 and (self.count is None or k <= self.count)

    def issubset(self, other: "LatticeSet") -> bool:
        if self.base != other.base:
            return False
        if other.count is None:
            return True
        return self.count is not None and self.count <= other.count

    def to_json(self) -> dict:
        mode = "infinite" if self.count is None else {"finite": self.count}
        return {"base": fmt_rat(self.base), "mode": mode}

    @classmethod
    def from_json(cls, data: dict) -> "LatticeSet":
        mode = data["mode"]
        count = None if mode == "infinite" else int(mode["finite"])
        return cls(parse_rat(data["base"]), count)


def lattice_g(x) -> LatticeSet:
    return LatticeSet(_in_closed_unit(x), None)


def lattice_gn(n: int, x) -> LatticeSet:
    return LatticeSet(_in_closed_unit(x), _check_n(n))


# --------------------------------------------------------------------------
# baire


def _power_peak(x: Fraction, y: Fraction, cap: int = 1 << 16) -> Optional[int]:
    """Index where ``|x**k - y**k|`` peaks (``inf`` if it never decreases).

    With ``0 < a < b < 1`` the increments ``a**k (1-a) - b**k (1-b)`` change
    sign exactly once, so the sequence is unimodal.
    """
    a, b = min(x, y), max(x, y)
    if b == 1:
        return math.inf
    if a == 0:
        return 1
    target = (1 - b) / (1 - a)
    ratio = a / b

    def settled(k):
        return ratio**k <= target

    hi = 1
    while not settled(hi):
        hi *= 2
        if hi > cap:
            return None
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if settled(mid):
            hi = mid
        else:
            lo = mid
    return hi


def baire_g(x) -> Fraction:
    x = _in_closed_unit(x)
    return ONE if x == 1 else ZERO


def baire_gn(n: int, x) -> Fraction:
    return _in_closed_unit(x) ** _check_n(n)


def baire_family() -> MappingFamily:
    return MappingFamily("baire", baire_gn, baire_g, "scalar", CLOSED_UNIT, separates_points=True, peak=_power_peak)


def thm_family() -> MappingFamily:
    return MappingFamily("thm", thm_gn, thm_g, "profile", OPEN_UNIT, separates_points=True)


def remark_family() -> MappingFamily:
    return MappingFamily("remark", remark_gn, remark_g, "profile", CLOSED_UNIT, separates_points=True)


def fan_family() -> MappingFamily:
    return MappingFamily("fan", fan_gn, fan_g, "fan", CLOSED_UNIT)


def lattice_family() -> MappingFamily:
    return MappingFamily("lattice", lattice_gn, lattice_g, "lattice", CLOSED_UNIT)


FAMILIES = {
    "thm": thm_family,
    "remark": remark_family,
    "fan": fan_family,
    "lattice": lattice_family,
    "baire": baire_family,
}

GLUED = ("thm", "remark", "baire")

# what check-diagonal asserts for each glued construction
DIAGONAL_EXPECTATION = {"thm": "discontinuous", "remark": "discontinuous", "baire": "continuous"}


def family(name: str) -> MappingFamily:
    try:
        return FAMILIES[name]()
    except KeyError:
        raise UnknownConstruction(f"unknown construction {name!r}; choose from {sorted(FAMILIES)}") from None


def assemble(name: str, max_depth: Optional[int] = None) -> GluedMapping:
    kwargs = {} if max_depth is None else {"max_depth": max_depth}
    if name == "thm":
        return GluedMapping("thm", scaffold_bandwidth(**kwargs), thm_family(), PROFILE)
    if name == "remark":
        return GluedMapping("remark", scaffold_bandwidth(**kwargs), remark_family(), PROFILE)
    if name == "baire":
        fam = baire_family()
        return GluedMapping("baire", scaffold_metric(fam, **kwargs), fam, LINEAR)
    if name in FAMILIES:
        raise UnknownConstruction(f"{name!r} has no glued mapping; its limit is not a diagonal of one")
    raise UnknownConstruction(f"unknown construction {name!r}; choose from {list(GLUED)}")
