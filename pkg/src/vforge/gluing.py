"""Gluing a sequence of continuous maps into a separately continuous one.

Given nested sets ``Δ ⊆ G_{n+1} ⊆ F_n ⊆ G_n`` (``G_0 = F_0 = X²``),
separating functions ``phi_n`` (0 off ``G_n``, 1 on ``F_n``), maps ``g_n`` into
an equiconnected set and their limit ``g``, the glued mapping is::

    f(x, y) = lam(g_n(x), g_{n+1}(x), phi_n(x, y))   on F_{n-1} \\ F_n
    f(x, y) = g(x)                                   on E = ∩ G_n

A :class:`Scaffold` bundles the ``G``/``F``/``phi`` data together with an
oracle for membership in ``E``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

from .equiconnect import Connector
from .errors import DomainError, RegionMismatch, ThresholdOrder, Undecided
from .rat import ONE, ZERO, clamp01, parse_rat
from .report import Report, ViolationWitness

DEFAULT_MAX_DEPTH = 64


class EMember(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Domain:
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool

    def __contains__(self, x) -> bool:
        if not isinstance(x, Fraction):
            return False
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def check(self, *xs) -> None:
        for x in xs:
            if x not in self:
                raise DomainError(f"{x} outside {self}")

    def __str__(self) -> str:
        return f"{'[' if self.lo_closed else '('}{self.lo}, {self.hi}{']' if self.hi_closed else ')'}"


OPEN_UNIT = Domain(ZERO, ONE, False, False)
CLOSED_UNIT = Domain(ZERO, ONE, True, True)


@dataclass(frozen=True)
class MappingFamily:
    """Continuous maps ``gn(n, x)`` (``n >= 1``) and their pointwise limit ``g``.

    ``peak``, when given, returns for ``x != y`` an index ``K`` such that
    ``d(g_k(x), g_k(y))`` is non-decreasing up to ``K`` and non-increasing
    afterwards (``math.inf`` if it never decreases, ``None`` if unknown).
    Metric scaffolds then locate the exit index by bisection.
    """

    name: str
    gn: Callable[[int, Fraction], Any]
    g: Callable[[Fraction], Any]
    carrier: str
    domain: Domain
    separates_points: bool = False
    peak: Optional[Callable[[Fraction, Fraction], Optional[int]]] = None


# --------------------------------------------------------------------------
# scaffolds


def phi_from_thresholds(gauge, alpha, beta, n: int, x, y) -> Fraction:
    a, b = alpha(n), beta(n)
    if b >= a:
        raise ThresholdOrder(f"need beta(n) < alpha(n), got {b} >= {a} at n={n}")
    return clamp01((a - gauge(n, x, y)) / (a - b))


@dataclass(frozen=True)
class Scaffold:
    name: str
    member_g: Callable[[int, Fraction, Fraction], bool]
    member_f: Callable[[int, Fraction, Fraction], bool]
    phi: Callable[[int, Fraction, Fraction], Fraction]
    e_member: Callable[[Fraction, Fraction], EMember]
    max_depth: int = DEFAULT_MAX_DEPTH
    locate: Optional[Callable[[Fraction, Fraction], int]] = None

    def exit_index(self, x: Fraction, y: Fraction) -> int:
        """Smallest ``n >= 1`` with ``(x, y) ∉ F_n``, so ``(x, y) ∈ F_{n-1} \\ F_n``.

        Raises :class:`Undecided` when ``E``-membership is unknown and no exit
        is found within ``max_depth``.
        """
        e = self.e_member(x, y)
        if e is EMember.YES:
            raise RegionMismatch("point lies in E; it has no exit index")
        if self.locate is not None:
            return self.locate(x, y)
        n = 1
        while self.member_f(n, x, y):
            n += 1
            if e is EMember.UNKNOWN and n > self.max_depth:
                raise Undecided(self.max_depth)
        return n


def scaffold_bandwidth(max_depth: int = DEFAULT_MAX_DEPTH) -> Scaffold:
    """``G_n = {|x-y| < 1/(n+2)}``, ``F_n = {|x-y| <= 1/(n+3)}``; ``E`` is the diagonal."""

    def alpha(n):
        return Fraction(1, n + 2)

    def beta(n):
        return Fraction(1, n + 3)

    def gauge(n, x, y):
        return abs(x - y)

    def member_g(n, x, y):
        return n == 0 or abs(x - y) < alpha(n)

    def member_f(n, x, y):
        return n == 0 or abs(x - y) <= beta(n)

    def phi(n, x, y):
        return phi_from_thresholds(gauge, alpha, beta, n, x, y)

    def e_member(x, y):
        return EMember.YES if x == y else EMember.NO

    def locate(x, y):
        d = abs(x - y)
        # first n with 1/(n+3) < d
        return max(1, int(1 / d) - 2)

    return Scaffold("bandwidth", member_g, member_f, phi, e_member, max_depth, locate)


class _MetricGauge:
    """``M_m(x, y) = max_{k <= m} d(g_k(x), g_k(y))``.

    With a unimodal peak hint ``K`` the running max is just ``d_{min(m, K)}``.
    """

    def __init__(self, family: MappingFamily, metric):
        self.family = family
        self.metric = metric

    def dist(self, k, x, y) -> Fraction:
        return self.metric(self.family.gn(k, x), self.family.gn(k, y))

    def peak(self, x, y):
        if self.family.peak is None or x == y:
            return None
        return self.family.peak(x, y)

    def running_max(self, m: int, x, y) -> Fraction:
        k_peak = self.peak(x, y)
        if k_peak is not None:
            return self.dist(min(m, k_peak), x, y)
        return max(self.dist(k, x, y) for k in range(1, m + 1))

    def exit_index(self, x, y) -> Optional[int]:
        """First ``n`` with ``M_{n+2} > 1/(n+1)`` via bisection, or ``None``
        when no peak hint is available or every distance vanishes."""
        k_peak = self.peak(x, y)
        if k_peak is None:
            return None
        if k_peak != math.inf and self.dist(k_peak, x, y) == 0:
            return None

        def exits(n):
            return self.running_max(n + 2, x, y) > Fraction(1, n + 1)

        if exits(1):
            return 1
        lo, hi = 1, 2
        while not exits(hi):
            lo, hi = hi, hi * 2
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if exits(mid):
                hi = mid
            else:
                lo = mid
        return hi


def scaffold_metric(
    family: MappingFamily,
    metric: Optional[Callable[[Any, Any], Fraction]] = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Scaffold:
    """Scaffold built from the distances ``d(g_k(x), g_k(y))``.

    ``G_n`` requires ``d < 1/n`` for ``k = 1..n+1`` and ``F_n`` requires
    ``d <= 1/(n+1)`` for ``k = 1..n+2``.  ``phi_n`` clamps the gauge
    ``max_{k <= n+2} d`` between the thresholds ``1/n`` and ``1/(n+1)``.
    """
    if metric is None:
        metric = lambda a, b: abs(a - b)  # noqa: E731
    gauge = _MetricGauge(family, metric)

    def alpha(n):
        return Fraction(1, n)

    def beta(n):
        return Fraction(1, n + 1)

    def member_g(n, x, y):
        return n == 0 or gauge.running_max(n + 1, x, y) < alpha(n)

    def member_f(n, x, y):
        return n == 0 or gauge.running_max(n + 2, x, y) <= beta(n)

    def phi(n, x, y):
        return phi_from_thresholds(lambda n, x, y: gauge.running_max(n + 2, x, y), alpha, beta, n, x, y)

    def e_member(x, y):
        if x == y:
            return EMember.YES
        return EMember.NO if family.separates_points else EMember.UNKNOWN

    scaffold = Scaffold(f"metric:{family.name}", member_g, member_f, phi, e_member, max_depth)

    def locate(x, y):
        n = gauge.exit_index(x, y)
        return scaffold.exit_index(x, y) if n is None else n

    return Scaffold(scaffold.name, member_g, member_f, phi, e_member, max_depth, locate)


# --------------------------------------------------------------------------
# glued mappings


@dataclass(frozen=True)
class GluedMapping:
    name: str
    scaffold: Scaffold
    family: MappingFamily
    connector: Connector

    @property
    def domain(self) -> Domain:
        return self.family.domain

    def __call__(self, x, y):
        return eval_glued(self, x, y)


def eval_glued(m: GluedMapping, x, y):
    x, y = parse_rat(x), parse_rat(y)
    m.domain.check(x, y)
    if m.scaffold.e_member(x, y) is EMember.YES:
        return m.family.g(x)
    n = m.scaffold.exit_index(x, y)
    gn = m.family.gn
    return m.connector(gn(n, x), gn(n + 1, x), m.scaffold.phi(n, x, y))


def glue_identity_check(m: GluedMapping, n: int, x, y) -> bool:
    """Check ``f = lam(lam(g_n, g_{n+1}, phi_n), g_{n+2}, phi_{n+1})`` on ``F_{n-1} \\ F_{n+1}``."""
    x, y = parse_rat(x), parse_rat(y)
    s = m.scaffold
    if n < 1 or not s.member_f(n - 1, x, y) or s.member_f(n + 1, x, y):
        raise RegionMismatch(f"({x}, {y}) is not in F_{n - 1} minus F_{n + 1}")
    gn, lam = m.family.gn, m.connector
    inner = lam(gn(n, x), gn(n + 1, x), s.phi(n, x, y))
    return eval_glued(m, x, y) == lam(inner, gn(n + 2, x), s.phi(n + 1, x, y))


def validate_nesting(s: Scaffold, samples: Sequence[tuple], depth: int) -> Report:
    verdicts = []
    for x, y in samples:
        x, y = parse_rat(x), parse_rat(y)
        problem = None
        for n in range(depth + 1):
            if not s.member_g(n, x, x):
                problem = (n, "diagonal outside G_n", (x, x))
            elif s.member_g(n + 1, x, y) and not s.member_f(n, x, y):
                problem = (n, "G_{n+1} not inside F_n", (x, y))
            elif s.member_f(n, x, y) and not s.member_g(n, x, y):
                problem = (n, "F_n not inside G_n", (x, y))
            if problem:
                break
        if problem:
            n, what, pt = problem
            verdicts.append(ViolationWitness(points=pt, check=what, detail={"n": n}))
            break
    return Report(
        construction=s.name,
        probe="nesting",
        params={"samples": len(samples), "depth": depth},
        verdicts=verdicts,
        passed=not verdicts,
    )


def validate_phi(s: Scaffold, samples: Sequence[tuple], depth: int) -> Report:
    """``phi_n`` lies in [0, 1], vanishes off ``G_n`` and equals 1 on ``F_n``."""
    verdicts = []
    for x, y in samples:
        x, y = parse_rat(x), parse_rat(y)
        for n in range(1, depth + 1):
            v = s.phi(n, x, y)
            bad = None
            if not 0 <= v <= 1:
                bad = "phi outside [0, 1]"
            elif not s.member_g(n, x, y) and v != 0:
                bad = "phi nonzero off G_n"
            elif s.member_f(n, x, y) and v != 1:
                bad = "phi not 1 on F_n"
            if bad:
                verdicts.append(ViolationWitness(points=(x, y), check=bad, detail={"n": n, "phi": v}))
                break
        if verdicts:
            break
    return Report(
        construction=s.name,
        probe="phi-plateaus",
        params={"samples": len(samples), "depth": depth},
        verdicts=verdicts,
        passed=not verdicts,
    )
