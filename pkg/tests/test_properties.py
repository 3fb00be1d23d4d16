"""Property-based checks of the invariants every simulation must satisfy."""
from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from linepursuit.evaluation import sup_cr_over_d, sup_cr_sweep
from linepursuit.kinematics import (
    Direction,
    Instance,
    NoCatch,
    Side,
    first_catch,
    optimal_offline_time,
    target_position,
)
from linepursuit.strategies import (
    FullAway,
    FullToward,
    NoSpeedAway,
    Zigzag,
    make_full_away,
    make_full_toward,
    make_no_knowledge_away,
    make_no_speed_away,
    make_zigzag,
)

settings.register_profile("pkg", max_examples=60, deadline=None)
settings.load_profile("pkg")


def fractions(lo, hi, den=1000):
    return st.integers(int(lo * den), int(hi * den)).map(lambda n: F(n, den))


sides = st.sampled_from([Side.LEFT, Side.RIGHT])
directions = st.sampled_from([Direction.AWAY, Direction.TOWARD])
ratios = st.sampled_from([F(5, 4), F(3, 2), 2, 3, 5])


@st.composite
def instances(draw, max_v=F(9, 10)):
    direction = draw(directions)
    v = draw(fractions(0, max_v))
    if direction is Direction.TOWARD and v == 0:
        v = F(1, 1000)
    return Instance(draw(fractions(1, 50)), v, draw(sides), direction)


@st.composite
def library_paths(draw):
    which = draw(st.integers(0, 3))
    if which == 0:
        return make_zigzag(draw(ratios), draw(sides))
    if which == 1:
        return make_no_speed_away(draw(fractions(1, 20)))
    if which == 2:
        return make_no_knowledge_away()
    return make_full_away(draw(fractions(0, F(9, 10))), draw(fractions(1, 20)), draw(sides))


@given(library_paths())
def test_unit_speed_bound(traj):
    pts = list(traj.breakpoints(12))
    for (t0, x0, _), (t1, x1, _) in zip(pts, pts[1:]):
        assert t1 > t0 and abs(x1 - x0) <= t1 - t0
    if traj.terminal is not None:
        assert abs(traj.terminal.velocity) <= 1


@given(library_paths(), instances())
def test_catch_is_first_contact(traj, inst):
    res = first_catch(traj, inst, 64)
    if isinstance(res, NoCatch):
        return
    target = target_position(inst, res.time)
    assert traj.position(res.time) == target == res.position
    # the robot has been strictly on one side of the target at every earlier breakpoint
    start_sign = 1 if -inst.p > 0 else -1
    for t, x, _ in traj.breakpoints(res.round + 2):
        if t >= res.time:
            break
        assert start_sign * (x - target_position(inst, t)) > 0


@given(library_paths(), instances())
def test_ratio_at_least_one(traj, inst):
    res = first_catch(traj, inst, 64)
    if not isinstance(res, NoCatch):
        assert res.time >= optimal_offline_time(inst)


@given(instances())
def test_deterministic(inst):
    a = first_catch(make_zigzag(2), inst, 64)
    b = first_catch(make_zigzag(2), inst, 64)
    assert a == b


@given(fractions(0, F(9, 10)), fractions(1, 100), fractions(1, 100), sides)
def test_full_away_scale_invariant(v, d1, d2, side):
    def cr(d):
        inst = Instance(d, v, side, Direction.AWAY)
        return first_catch(make_full_away(v, d), inst).time / optimal_offline_time(inst)
    assert cr(d1) == cr(d2)


@given(fractions(F(1, 100), 3), fractions(1, 100), fractions(1, 100), sides)
def test_full_toward_scale_invariant(v, d1, d2, side):
    def cr(d):
        inst = Instance(d, v, side, Direction.TOWARD)
        return first_catch(make_full_toward(v, d), inst).time / optimal_offline_time(inst)
    assert cr(d1) == cr(d2)


@given(library_paths(), instances())
def test_away_catch_is_beyond_start(traj, inst):
    inst = Instance(inst.d, inst.v, inst.side, Direction.AWAY)
    res = first_catch(traj, inst, 64)
    if not isinstance(res, NoCatch):
        assert abs(res.position) >= inst.d / (1 - inst.v)


@settings(max_examples=25)
@given(ratios, fractions(0, 1), st.lists(fractions(1, 200), min_size=1, max_size=8))
def test_sweep_never_above_exact_sup(a, share, ds):
    # zig-zag with ratio a only catches away targets slower than (a-1)/(a+1)
    v = share * (a - 1) / (a + 1) * F(9, 10)
    exact = sup_cr_over_d(Zigzag(a), v, (1, 200), Direction.AWAY, 256)
    swept = sup_cr_sweep(Zigzag(a), [v], ds, Direction.AWAY, 256)
    if not swept.violations and not exact.violations:
        assert swept.empirical_sup <= float(exact.empirical_sup) * (1 + 1e-12)


@settings(max_examples=25)
@given(fractions(0, F(9, 10)), fractions(1, 20), fractions(1, 20))
def test_informed_sups_within_bound(v, d_lo, width):
    for spec, direction in ((FullAway(), "away"), (NoSpeedAway(), "away")):
        ev = sup_cr_over_d(spec, v, (d_lo, d_lo + width), direction)
        assert ev.within_bound
    if v > 0:
        assert sup_cr_over_d(FullToward(), v, (d_lo, d_lo + width), "toward").within_bound
