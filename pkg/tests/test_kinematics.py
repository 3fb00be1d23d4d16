import io
from fractions import Fraction as F

import pytest

from linepursuit.kinematics import (
    Direction,
    Instance,
    NoCatch,
    NoCatchError,
    Ray,
    Side,
    Trajectory,
    as_fraction,
    first_catch,
    instance_cr,
    optimal_offline_time,
    read_trajectory_csv,
    target_position,
    waiting_trajectory,
    write_trajectory_csv,
)
from linepursuit.strategies import make_full_away, make_no_speed_toward, make_zigzag

R, L = Side.RIGHT, Side.LEFT
TOWARD, AWAY = Direction.TOWARD, Direction.AWAY


def straight_right():
    return Trajectory((), Ray(0, 0, 1), terminal_round=0)


@pytest.mark.parametrize("inst,t,expected", [
    (Instance(1, F(1, 2), R, AWAY), 2, 2),
    (Instance(1, F(1, 2), L, TOWARD), 4, 1),
    (Instance(3, 2, R, TOWARD), F(3, 2), 0),
])
def test_target_position(inst, t, expected):
    assert target_position(inst, t) == expected


@pytest.mark.parametrize("inst,expected", [
    (Instance(1, F(1, 2), R, AWAY), 2),
    (Instance(1, F(1, 2), R, TOWARD), F(2, 3)),
    (Instance(3, 2, R, TOWARD), 1),
])
def test_optimal_offline_time(inst, expected):
    assert optimal_offline_time(inst) == expected


def test_instance_validation():
    with pytest.raises(ValueError):
        Instance(F(1, 2), F(1, 4), R, AWAY)
    with pytest.raises(ValueError):
        Instance(1, 1, R, AWAY)
    with pytest.raises(ValueError):
        Instance(1, -1, R, TOWARD)
    assert Instance("3/2", "0.25", "L", "away").p == F(-3, 2)


def test_catch_on_straight_ray():
    res = first_catch(straight_right(), Instance(1, F(1, 2), R, AWAY))
    assert (res.time, res.position) == (2, 2)


def test_waiting_catches_toward_target():
    res = first_catch(waiting_trajectory(), Instance(3, 2, R, TOWARD))
    assert (res.time, res.position) == (F(3, 2), 0)
    assert instance_cr(waiting_trajectory(), Instance(3, 2, R, TOWARD)) == F(3, 2)


def test_full_away_opposite_side():
    traj = make_full_away(F(1, 2), 1, R)
    res = first_catch(traj, Instance(1, F(1, 2), L, AWAY))
    # out to 2 and back to the origin takes 4; the target is then at -3 and the gap closes at 1/2
    assert res.time == 10
    assert res.position == -6
    assert instance_cr(traj, Instance(1, F(1, 2), L, AWAY)) == 5
    assert instance_cr(traj, Instance(1, F(1, 2), R, AWAY)) == 1


def test_no_speed_toward_catch():
    traj = make_no_speed_toward(1, R)
    res = first_catch(traj, Instance(1, F(1, 2), L, TOWARD))
    assert res.time == 2
    assert instance_cr(traj, Instance(1, F(1, 2), L, TOWARD)) == 3


def test_tangential_contact_counts():
    # the robot reaches the target at t = 2 and then walks alongside it
    traj = Trajectory([(F(2), F(2), 0), (F(4), F(3), 1)], Ray(4, 3, F(1, 2)))
    res = first_catch(traj, Instance(1, F(1, 2), R, AWAY))
    assert (res.time, res.position) == (2, 2)


def test_no_catch_is_a_value():
    res = first_catch(waiting_trajectory(), Instance(1, F(1, 2), R, AWAY))
    assert isinstance(res, NoCatch)
    assert not res
    with pytest.raises(NoCatchError):
        instance_cr(waiting_trajectory(), Instance(1, F(1, 2), R, AWAY))


def test_round_cap_limits_scan():
    traj = make_zigzag(2)
    inst = Instance(1000, 0, R, AWAY)
    assert isinstance(first_catch(traj, inst, round_cap=4), NoCatch)
    assert first_catch(traj, inst, round_cap=64).time > 0


def test_zeno_zigzag_catches_and_misses():
    traj = make_zigzag(F(1, 2))
    assert first_catch(traj, Instance(10, F(1, 2), R, TOWARD)).time == 20
    # this target reaches the origin exactly when the turns accumulate there
    assert isinstance(first_catch(traj, Instance(2, F(1, 2), L, TOWARD)), NoCatch)
    assert first_catch(make_zigzag(1), Instance(1, F(1, 2), L, TOWARD)).time == 2


def test_speed_bound_enforced():
    with pytest.raises(ValueError):
        Trajectory([(F(1), F(2), 0)]).num_breakpoints()
    with pytest.raises(ValueError):
        Ray(0, 0, 2)
    with pytest.raises(ValueError):
        Trajectory([(F(1), F(1), 0), (F(1), F(0), 1)]).num_breakpoints()


def test_trajectory_position_interpolates():
    traj = make_zigzag(2)
    assert traj.position(F(1, 2)) == F(1, 2)
    assert traj.position(3) == -1
    assert waiting_trajectory().position(100) == 0


def test_csv_round_trip():
    traj = make_full_away(F(1, 2), 1, R)
    text = write_trajectory_csv(traj)
    assert text.splitlines() == ["t,x", "0,0", "2,2", "ray,2,2,-1"]
    back = read_trajectory_csv(io.StringIO(text))
    inst = Instance(1, F(1, 2), L, AWAY)
    assert first_catch(back, inst).time == first_catch(traj, inst).time


def test_csv_accepts_decimals_and_rationals():
    traj = read_trajectory_csv(io.StringIO("t,x\n0,0\n0.5,1/2\n1.5,-0.5\n"))
    assert list(traj.breakpoints())[-1][:2] == (F(3, 2), F(-1, 2))


@pytest.mark.parametrize("text", [
    "x,t\n0,0\n",
    "t,x\n1,1\n",
    "t,x\n0,0\n1,2\n",
    "t,x\n0,0\n1,1\n1,0\n",
    "t,x\n0,0\nray,0,0,2\n",
    "t,x\n0,0\nray,0,0,0\n1,1\n",
    "t,x\n0,0\n1,abc\n",
])
def test_csv_rejects_malformed(text):
    with pytest.raises(ValueError):
        read_trajectory_csv(io.StringIO(text))


def test_as_fraction_forms():
    assert as_fraction("1/3") == F(1, 3)
    assert as_fraction("0.25") == F(1, 4)
    assert as_fraction(2) == 2
