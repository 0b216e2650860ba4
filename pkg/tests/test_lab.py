from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vforge.equiconnect import FanPoint
from vforge.errors import DomainError, SequenceOutOfRegion
from vforge.gallery import assemble, family, thm_g
from vforge.hyperspace import (
    Constant,
    Interval,
    OpenIntervalUnion,
    OpenPattern,
    Profile,
    hausdorff_distance,
    lower_meets,
)
from vforge.lab import (
    Ball,
    LatticeThickening,
    PatternOpen,
    Window,
    condition3_probe,
    convergence_probe,
    diagonal_preimage_exact,
    dyadic_offsets,
    entry_indices,
    hausdorff_gap,
    joint_diagonal_witness,
    lower_probe,
    sample_points,
    separate_probe,
    upper_probe,
)
from vforge.report import NoViolationAtResolution, UndecidedVerdict, ViolationWitness

open_unit = st.fractions(min_value=0, max_value=1, max_denominator=500).filter(lambda x: 0 < x < 1)


def window(copy, lo, hi):
    return OpenPattern.single_copy(copy, OpenIntervalUnion((Interval(F(lo), F(hi)),)))


def test_sample_points_are_dyadic_and_symmetric():
    h = F(1, 8)
    offs = dyadic_offsets(h)
    pts = sample_points(F(1, 2), h)
    assert len(pts) == 32 == 2 * len(offs)
    assert all(0 < o < h for o in offs)
    assert all(o.denominator & (o.denominator - 1) == 0 for o in offs)
    assert F(1, 2) + h / 2 in pts and F(1, 2) - h / 2 in pts


def test_diagonal_preimage_examples():
    seg, nbhd = diagonal_preimage_exact(F(1, 2))
    assert (seg.hi, seg.hi_closed, nbhd) == (F(1, 2), True, False)
    seg, nbhd = diagonal_preimage_exact(F(1, 4))
    assert str(seg) == "(0, 1/4]" and not nbhd


@given(open_unit)
def test_diagonal_preimage_property(x0):
    seg, nbhd = diagonal_preimage_exact(x0)
    assert seg.hi == x0 and seg.hi_closed and not nbhd
    # spot-check membership against the exact halo test
    halo = PatternOpen("upper", OpenPattern.halo(x0))
    for x in (x0 / 2, x0, (x0 + 1) / 2):
        assert (x in seg) == halo.holds(thm_g(x))


def test_upper_probe_examples():
    halo = OpenPattern.halo(F(1, 2))
    verdict = upper_probe(thm_g, F(1, 2), halo, [F(1, 4), F(1, 8), F(1, 16)])
    assert isinstance(verdict, ViolationWitness)
    assert verdict.points == (F(5, 8), F(9, 16), F(17, 32))

    const = lambda x: Profile.of((), F(1, 4))  # noqa: E731
    assert isinstance(upper_probe(const, F(1, 2), halo, [F(1, 4), F(1, 8)]), NoViolationAtResolution)
    whole = OpenPattern.of((), Constant(OpenIntervalUnion.whole()))
    assert isinstance(upper_probe(thm_g, F(1, 2), whole, [F(1, 4), F(1, 8)]), NoViolationAtResolution)


def test_lower_probe_examples():
    sched = [F(1, 8), F(1, 16), F(1, 32)]
    assert isinstance(lower_probe(thm_g, F(1, 2), window(5, "1/4", "1/3"), sched), NoViolationAtResolution)
    # the window has half-width 1/100, so the schedule must reach below it
    near = window(2, F(1, 3) - F(1, 100), F(1, 3) + F(1, 100))
    fine = [F(1, 8), F(1, 64), F(1, 512)]
    assert isinstance(lower_probe(thm_g, F(1, 3), near, fine), NoViolationAtResolution)

    def jump(x):
        return Profile.of((), F(0) if x < F(1, 2) else F(1, 2))

    verdict = lower_probe(jump, F(1, 2), window(1, "1/4", "1/3"), sched)
    assert isinstance(verdict, ViolationWitness)
    # every witness re-validates
    for p in verdict.points:
        assert not lower_meets(jump(p), verdict.pattern.pattern)


def test_witnesses_revalidate_on_the_diagonal():
    for name, x0 in (("thm", F(1, 2)), ("remark", F(1, 3)), ("thm", F(7, 11))):
        m = assemble(name)
        verdict = joint_diagonal_witness(m, x0)
        assert isinstance(verdict, ViolationWitness)
        for p in verdict.points:
            assert not verdict.pattern.holds(m(p, p))


def test_joint_diagonal_examples():
    assert isinstance(joint_diagonal_witness(assemble("thm"), F(1, 2)), ViolationWitness)
    assert isinstance(joint_diagonal_witness(assemble("remark"), F(1, 3)), ViolationWitness)
    assert isinstance(joint_diagonal_witness(assemble("baire"), F(1, 2)), NoViolationAtResolution)
    with pytest.raises(DomainError):
        joint_diagonal_witness(assemble("baire"), F(1))


@pytest.mark.parametrize(
    "name,x,y,axes,r",
    [
        ("thm", "1/2", "1/2", ("y",), F(1, 2**10)),
        ("thm", "1/2", "1/4", ("x", "y"), F(1, 64)),
        ("remark", "2/3", "1/3", ("x", "y"), F(1, 64)),
        ("baire", "1", "1", ("x",), F(1, 8)),
    ],
)
def test_separate_probe_examples(name, x, y, axes, r):
    m = assemble(name)
    for axis in axes:
        rep = separate_probe(m, x, y, axis, r)
        assert rep.passed, rep.dumps()[:400]
        assert not rep.violations and not rep.undecided


def test_separate_probe_rejects_bad_axis():
    with pytest.raises(ValueError):
        separate_probe(assemble("thm"), "1/2", "1/2", "z")


def test_convergence_fan_ball():
    rep = convergence_probe(family("fan"), 0, [Ball("upper", FanPoint(0, 1), F(1, 10))])
    assert entry_indices(rep) == [11]


def test_convergence_lattice_unit_thickening():
    rep = convergence_probe(family("lattice"), F(1, 2), [LatticeThickening(F(1, 2), F(1))])
    assert entry_indices(rep) == [1]
    rep = convergence_probe(family("lattice"), F(1, 2), [Window(F(7, 2), F(1, 10))])
    assert entry_indices(rep) == [3]


def _first_entry(ok, depth=200):
    n_ok = None
    for n in range(depth, 0, -1):
        if ok(n):
            n_ok = n
        else:
            break
    return n_ok


def test_convergence_thm_lower_window_matches_direct_scan():
    lo, hi = F(1, 3), F(2, 5)
    v = PatternOpen("lower", window(1, lo, hi))
    rep = convergence_probe(family("thm"), F(1, 2), [v])
    # copy 1 of g_n(1/2) is [0, 1/2 - 1/(n+1)], which meets (lo, hi) iff its
    # top exceeds lo; at n = 5 the top is exactly 1/3 and still misses
    expected = _first_entry(lambda n: F(1, 2) - F(1, n + 1) > lo)
    assert entry_indices(rep) == [expected] == [6]


def test_convergence_reports_undecided_when_depth_too_small():
    rep = convergence_probe(family("fan"), 0, [Ball("upper", FanPoint(0, 1), F(1, 10))], depth=5)
    assert not rep.passed
    assert isinstance(rep.verdicts[0], UndecidedVerdict)


def test_convergence_rejects_opens_that_miss_the_limit():
    with pytest.raises(ValueError):
        convergence_probe(family("fan"), 0, [Ball("upper", FanPoint(0, -1), F(1, 10))])


@pytest.mark.parametrize("name", ["thm", "remark", "fan", "lattice", "baire"])
def test_convergence_default_opens(name):
    x = F(1, 3)
    assert convergence_probe(family(name), x).passed


def test_condition3_examples():
    m = assemble("thm")
    x = F(1, 2)
    rep = condition3_probe(m, x, lambda n: (x + F(1, n + 3), F(1, 2)))
    assert rep.passed
    rep = condition3_probe(m, x, lambda n: (x, F(n % 7, 7)))
    assert rep.passed
    with pytest.raises(SequenceOutOfRegion):
        condition3_probe(m, F(1, 4), lambda n: (F(3, 4), F(0)))


def test_hausdorff_gap_examples():
    thm = assemble("thm")
    assert hausdorff_gap(thm, F(1, 2), F(1, 4)) == F(1, 2)
    assert hausdorff_gap(thm, F(1, 4), F(1, 5)) == F(1, 4)
    baire = assemble("baire")
    assert hausdorff_gap(baire, F(1, 2), F(1, 2) + F(1, 2**20)) <= F(1, 100)


@settings(max_examples=100, deadline=None)
@given(open_unit, st.fractions(min_value=F(-1, 4), max_value=F(1, 4), max_denominator=500))
def test_gap_equals_x_off_diagonal(x, d):
    y = x + d
    if d == 0 or not 0 < y < 1:
        return
    assert hausdorff_gap(assemble("thm"), x, y) == x


@given(open_unit, open_unit)
def test_g_is_hausdorff_isometric(x, y):
    assert hausdorff_distance(thm_g(x), thm_g(y)) == abs(x - y)


def test_probes_are_deterministic():
    m = assemble("thm")
    a = separate_probe(m, "3/7", "2/7", "x", F(1, 128)).dumps()
    b = separate_probe(m, "3/7", "2/7", "x", F(1, 128)).dumps()
    assert a == b
