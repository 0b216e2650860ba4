from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vforge.equiconnect import (
    FAN,
    FAN_FIXED_SPLIT,
    LINEAR,
    ORIGIN,
    PROFILE,
    Connector,
    FanPoint,
    axioms_check,
    continuity_probe_lambda,
    get_connector,
    lambda_fan,
    lambda_linear,
    lambda_profile,
    sample_triples,
)
from vforge.errors import DomainError
from vforge.hyperspace import Profile, hausdorff_distance, profile_subset
from vforge.report import NoViolationAtResolution, ViolationWitness


def P(prefix, tail=0):
    return Profile.of([F(a) for a in prefix], F(tail))


levels = st.fractions(min_value=0, max_value=1, max_denominator=24)
z1_profiles = st.lists(levels, max_size=5).map(lambda pre: Profile.of(pre, 0))
times = st.fractions(min_value=0, max_value=1, max_denominator=16)
fan_points = st.one_of(
    st.just(ORIGIN),
    st.builds(
        lambda n, x: FanPoint(x, n * x),
        st.integers(1, 6),
        st.fractions(min_value=-2, max_value=2, max_denominator=8),
    ),
)


def test_profile_example():
    assert lambda_profile(P(["1/6", "1/6"]), P(["1/3"]), F(1, 2)) == P(["1/4", "1/12"])


def test_profile_outside_z1_is_a_domain_error():
    with pytest.raises(DomainError):
        lambda_profile(P([], "1/2"), P([], "1/4"), F(1, 2))
    # the diagonal is allowed for any profile
    assert lambda_profile(P([], "1/2"), P([], "1/2"), F(1, 3)) == P([], "1/2")


def test_linear_examples():
    assert lambda_linear(F(1, 2), F(1, 4), 1) == F(1, 4)
    assert lambda_linear(F(1, 2), F(1, 4), F(1, 2)) == F(3, 8)
    assert lambda_linear(F(7, 9), F(7, 9), F(1, 3)) == F(7, 9)


def test_fan_examples():
    u, v = FanPoint(1, 2), FanPoint(1, 1)
    assert lambda_fan(u, v, F(2, 3)) == ORIGIN
    assert lambda_fan(u, v, F(1, 3)) == FanPoint(F(1, 2), 1)
    assert lambda_fan(u, FanPoint(2, 4), F(1, 2)) == FanPoint(F(3, 2), 3)


def test_fan_points_must_lie_in_the_fan():
    assert FanPoint(2, 6).in_fan() and ORIGIN.in_fan()
    assert not FanPoint(1, F(3, 2)).in_fan()
    # the limit points are in the closure only
    assert not FanPoint(0, 1).in_fan()


@given(z1_profiles, z1_profiles, times)
def test_profile_axioms(u, v, t):
    w = lambda_profile(u, v, t)
    assert w.tail == 0
    assert lambda_profile(u, v, 0) == u
    assert lambda_profile(v, u, 1) == u
    assert lambda_profile(u, u, t) == u


@given(z1_profiles, z1_profiles, z1_profiles, z1_profiles, times)
def test_profile_lambda_is_monotone(u, u2, v, v2, t):
    lo_u = Profile.of([min(u.level(n), u2.level(n)) for n in range(1, 7)], 0)
    lo_v = Profile.of([min(v.level(n), v2.level(n)) for n in range(1, 7)], 0)
    assert profile_subset(lambda_profile(lo_u, lo_v, t), lambda_profile(u, v, t))


@given(z1_profiles, z1_profiles, times, times)
def test_profile_lambda_lipschitz_in_t(u, v, t, s):
    d = hausdorff_distance(lambda_profile(u, v, t), lambda_profile(u, v, s))
    assert d <= abs(t - s) * hausdorff_distance(u, v)


@given(fan_points, fan_points, times)
def test_fan_lambda_stays_in_fan(u, v, t):
    w = lambda_fan(u, v, t)
    assert w.in_fan()
    assert lambda_fan(u, v, 0) == u
    assert lambda_fan(v, u, 1) == u
    assert lambda_fan(u, u, t) == u


@pytest.mark.parametrize("c", [PROFILE, LINEAR, FAN])
def test_axioms_pass_on_samples(c):
    rep = axioms_check(c, sample_triples(c, 200, seed=3))
    assert rep.passed and rep.verdicts == []


def test_broken_connector_flags_axiom_ii():
    broken = Connector("broken", "scalar", lambda u, v, t: v, lambda w: True, lambda a, b: abs(a - b), None)
    rep = axioms_check(broken, [(F(1, 2), F(1, 4), F(0))])
    assert not rep.passed
    (w,) = rep.violations
    assert w.check == "axiom (ii)"


def test_continuity_probe_profile_connector():
    verdict = continuity_probe_lambda(PROFILE, (P(["1/6"]), P(["1/3"]), F(1, 2)), [F(1, 4), F(1, 16), F(1, 64)])
    assert isinstance(verdict, NoViolationAtResolution)
    assert verdict.h == F(1, 64)


def _cross_line_base():
    # v close to the origin on a different line than u
    return FanPoint(1, 1), FanPoint(F(1, 1024), F(2, 1024)), F(1, 4)


def test_continuity_probe_fan_near_origin():
    sched = [F(1, 2**k) for k in range(3, 12, 2)]
    assert isinstance(continuity_probe_lambda(FAN, _cross_line_base(), sched), NoViolationAtResolution)


def test_fixed_split_negative_control():
    sched = [F(1, 2**k) for k in range(3, 12, 2)]
    # at the origin the path is linear; from another line it turns at t = 1/2
    base = (FanPoint(1, 2), ORIGIN, F(1, 2))
    verdict = continuity_probe_lambda(FAN_FIXED_SPLIT, base, sched)
    assert isinstance(verdict, ViolationWitness)
    assert isinstance(continuity_probe_lambda(FAN, base, sched), NoViolationAtResolution)


def test_probe_schedule_validation():
    with pytest.raises(ValueError):
        continuity_probe_lambda(LINEAR, (F(0), F(1), F(1, 2)), [F(1, 4)])
    with pytest.raises(ValueError):
        continuity_probe_lambda(LINEAR, (F(0), F(1), F(1, 2)), [F(1, 16), F(1, 4)])


def test_connector_lookup():
    assert get_connector("fan") is FAN
    with pytest.raises(KeyError):
        get_connector("nope")


def test_fan_point_json_round_trip():
    p = FanPoint(F(1, 2), 1)
    assert p.to_json() == {"x": "1/2", "y": "1"}
    assert FanPoint.from_json(p.to_json()) == p
