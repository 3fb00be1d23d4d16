"""Adversarial instance constructions from the lower-bound arguments.

Each builder inspects a concrete trajectory, places a target where the strategy
does worst and reports the ratio the construction guarantees (``predicted_lb``)
next to the ratio the trajectory actually realizes on that instance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .bounds import Ratio, full_away_bound, full_toward_bound
from .kinematics import (
    DEFAULT_ROUND_CAP,
    Direction,
    Instance,
    NoCatch,
    Side,
    Trajectory,
    as_fraction,
    first_catch,
    optimal_offline_time,
)
from .strategies import StrategySpec


class AuditError(RuntimeError):
    """The audit could not be carried out (e.g. the horizon is too short)."""


class NoWitness(RuntimeError):
    """No adversarial instance exists for this trajectory under the construction."""


@dataclass(frozen=True)
class ConeAudit:
    beta: Fraction
    t1: Fraction
    x1: Fraction
    t0: Fraction
    x0: Fraction
    eps0: Fraction
    eps1: Fraction
    p: Fraction
    turning_points: int
    beta_limit_bound: Ratio


@dataclass(frozen=True)
class AdversaryWitness:
    instance: Instance
    predicted_lb: Ratio
    construction: str
    audit: Optional[ConeAudit] = None
    realized_cr: Optional[Ratio] = None
    tolerance: Ratio = Fraction(0)

    @property
    def holds(self) -> bool:
        """Realized ratio reaches the prediction up to the declared tolerance."""
        if self.realized_cr is None:
            return False
        if self.predicted_lb == math.inf:
            return self.realized_cr == math.inf
        return float(self.realized_cr) >= float(self.predicted_lb) - float(self.tolerance)


def realized_cr(traj: Trajectory, inst: Instance, round_cap: int) -> Ratio:
    res = first_catch(traj, inst, round_cap)
    if isinstance(res, NoCatch):
        return math.inf
    return res.time / optimal_offline_time(inst)


def _first_reach(traj: Trajectory, target_of_t, round_cap: int, t_max=None):
    """First time ``|X(t)| >= target_of_t(t)`` where the target is affine in t.

    ``target_of_t`` is ``(c0, c1)`` meaning ``c0 + c1 * t``. Returns ``(t, x)`` or None.
    """
    c0, c1 = target_of_t
    for seg in traj.segments(round_cap):
        for sgn in (1, -1):
            if sgn * seg.x0 - (c0 + c1 * seg.t0) >= 0:
                return seg.t0, seg.x0
        best = None
        for sgn in (1, -1):
            h0 = sgn * seg.x0 - (c0 + c1 * seg.t0)
            h1 = sgn * seg.x1 - (c0 + c1 * seg.t1)
            if h1 >= 0:
                t = seg.t0 + h0 * (seg.t1 - seg.t0) / (h0 - h1)
                if best is None or t < best[0]:
                    best = (t, seg.position(t))
        if best is not None:
            if t_max is not None and best[0] > t_max:
                return None
            return best
        if t_max is not None and seg.t1 > t_max:
            return None
    ray = traj.terminal
    if ray is None or traj.zeno is not None or not traj.is_finite:
        return None
    for sgn in (1, -1):
        h0 = sgn * ray.x - (c0 + c1 * ray.t)
        if h0 >= 0:
            return ray.t, ray.x
    best = None
    for sgn in (1, -1):
        h0 = sgn * ray.x - (c0 + c1 * ray.t)
        rate = sgn * ray.velocity - c1
        if rate > 0:
            t = ray.t - h0 / rate
            if best is None or t < best[0]:
                best = (t, ray.position(t))
    if best is not None and t_max is not None and best[0] > t_max:
        return None
    return best


def opposite_side_witness(spec_or_traj: Union[StrategySpec, Trajectory], v, d, direction=None,
                          round_cap: int = DEFAULT_ROUND_CAP) -> AdversaryWitness:
    """Target on the side opposite the robot's first decisive excursion.

    Away: the robot must reach ``±d/(1-v)`` to catch anything; the target goes to
    the other side. Toward: the first point where the robot meets the virtual
    same-side target decides the side. ``predicted_lb`` is the universal lower
    bound of the full-knowledge model.
    """
    v, d = as_fraction(v), as_fraction(d)
    if isinstance(spec_or_traj, Trajectory):
        traj = spec_or_traj
        direction = Direction.parse(direction)
    else:
        spec = spec_or_traj.with_knowledge(v=v, d=d)
        traj = spec.build()
        direction = Direction.parse(direction) if direction is not None else spec.direction
    if direction is Direction.AWAY:
        reach = _first_reach(traj, (d / (1 - v), Fraction(0)), round_cap)
        lb = full_away_bound(v)
    else:
        reach = _first_reach(traj, (d, -v), round_cap, t_max=d / v if v > 0 else None)
        lb = full_toward_bound(v)
    if reach is None or reach[1] == 0:
        side = Side.LEFT if _first_move_sign(traj) >= 0 else Side.RIGHT
    else:
        side = Side.of(reach[1]).opposite
    inst = Instance(d, v, side, direction)
    return AdversaryWitness(inst, lb, "opposite-side", realized_cr=realized_cr(traj, inst, round_cap))


def _first_move_sign(traj: Trajectory) -> int:
    for seg in traj.segments():
        if seg.x1 != 0:
            return 1 if seg.x1 > 0 else -1
        if seg.index > 1000:
            break
    ray = traj.terminal
    if ray is not None and ray.velocity != 0:
        return 1 if ray.velocity > 0 else -1
    return 0


def _turning_ratios(traj: Trajectory, horizon: Fraction):
    """(t, x) of the nonzero breakpoints up to ``horizon``."""
    out = []
    for t, x, _ in traj.breakpoints():
        if t > horizon:
            break
        if x != 0:
            out.append((t, x))
    return out


def cone_limit_bound(beta, v) -> Ratio:
    """``1 + (1+b)^2 / ((1+b v)(b-1))``; infinite at ``b = 1``."""
    beta, v = as_fraction(beta), as_fraction(v)
    if beta <= 1:
        return math.inf
    return 1 + (1 + beta) ** 2 / ((1 + beta * v) * (beta - 1))


def cone_audit(traj: Trajectory, v, horizon, eps0=Fraction(1, 10 ** 6), eps1=Fraction(1, 10 ** 6),
               *, beta_rtol=1e-9, min_turns: int = 20, stable_window: int = 5,
               round_cap: int = 100_000) -> AdversaryWitness:
    """Cone construction against a toward-moving target of speed ``v``.

    ``beta`` is the running infimum of ``t/|X(t)|`` over breakpoints up to the
    horizon (the value at the last turning point); it must have settled to
    ``beta_rtol`` over the last ``stable_window`` turning points. Bounded
    trajectories get the contracting witness instead.
    """
    v, horizon = as_fraction(v), as_fraction(horizon)
    eps0, eps1 = as_fraction(eps0), as_fraction(eps1)
    if v <= 0 or eps0 <= 0 or eps1 <= 0:
        raise ValueError("v, eps0 and eps1 must be positive")
    turns = _turning_ratios(traj, horizon)
    ray = traj.terminal if traj.zeno is None else None
    moving_ray = ray is not None and ray.velocity != 0 and traj.is_finite and ray.t <= horizon

    if not moving_ray and _is_bounded(traj, turns):
        return _contracting_witness(traj, v, turns, round_cap)

    if moving_ray:
        beta = 1 / abs(ray.velocity)
        n_turns = len(turns)
    else:
        if len(turns) < min_turns:
            raise AuditError(f"horizon {horizon} covers {len(turns)} turning points; need {min_turns}")
        ratios = [t / abs(x) for t, x in turns]
        suffix = ratios[:]
        for i in range(len(suffix) - 2, -1, -1):
            suffix[i] = min(suffix[i], suffix[i + 1])
        beta = suffix[-1]
        window = suffix[-stable_window:]
        spread = float(max(window) - min(window)) / float(beta)
        if spread >= beta_rtol:
            raise AuditError(
                f"beta not stable over the last {stable_window} turning points "
                f"(relative spread {spread:.3g} >= {beta_rtol:g}); extend the horizon")
        n_turns = len(turns)

    if beta == 1:
        side = Side.of(ray.velocity).opposite if moving_ray else Side.LEFT
        inst = Instance(1, v, side, Direction.TOWARD)
        return AdversaryWitness(inst, math.inf, "cone", realized_cr=realized_cr(traj, inst, round_cap))

    target_ratio = beta + eps1
    t1 = x1 = None
    if moving_ray:
        sgn = 1 if ray.velocity > 0 else -1
        t = (abs(ray.velocity) * ray.t - sgn * ray.x) / (abs(ray.velocity) - 1 / target_ratio)
        if t < ray.t:
            raise AuditError("terminal ray starts outside the cone")
        t1, x1 = t, ray.position(t)
    else:
        legs = []
        for seg in traj.segments(round_cap):
            if seg.t1 > horizon:
                break
            legs.append(seg)
        for seg in reversed(legs):
            if seg.x1 == 0 or abs(seg.x1) <= abs(seg.x0):
                continue
            sgn = 1 if seg.x1 > 0 else -1
            s = seg.slope
            # sgn*(x0 + s (t - t0)) = t / target_ratio
            denom = sgn * s - 1 / target_ratio
            if denom == 0:
                continue
            t = (sgn * s * seg.t0 - sgn * seg.x0) / denom
            if seg.t0 <= t <= seg.t1:
                t1, x1 = t, seg.position(t)
                break
        if t1 is None:
            raise AuditError("no outward leg crosses the cone line inside the horizon")

    sgn = 1 if x1 > 0 else -1
    mag = abs(x1)
    gap = t1 - mag
    x0 = -sgn * gap / (1 + beta)
    t0 = beta * gap / (1 + beta)
    p_mag = (1 + beta * v) * gap / (1 + beta)
    # turning points before t1 may sit slightly outside the cone while beta settles;
    # push the apex out far enough that the target clears every one of them
    overshoot = max((abs(x) + v * t - p_mag for t, x in turns if t <= t1 and x * sgn < 0),
                    default=Fraction(0))
    p_mag += max(overshoot, Fraction(0)) + eps0
    p = -sgn * p_mag
    if p_mag < 1:
        raise AuditError(f"cone apex too close to the origin (|p| = {float(p_mag):.3g} < 1)")
    inst = Instance(p_mag, v, Side.of(p), Direction.TOWARD)
    predicted = (mag + t1 + p_mag) / p_mag
    audit = ConeAudit(beta, t1, x1, t0, x0, eps0, eps1, p, n_turns, cone_limit_bound(beta, v))
    return AdversaryWitness(inst, predicted, "cone", audit, realized_cr(traj, inst, round_cap))


def _is_bounded(traj: Trajectory, turns) -> bool:
    if not turns:
        return True
    if traj.zeno is not None:
        return True
    mags = [abs(x) for _, x in turns]
    half = len(mags) // 2
    if half == 0:
        return traj.is_finite and (traj.terminal is None or traj.terminal.velocity == 0)
    return max(mags[half:]) <= max(mags[:half])


def _contracting_witness(traj, v, turns, round_cap):
    reach = max((abs(x) for _, x in turns), default=Fraction(0))
    d = Fraction(10 ** 4) * max(Fraction(1), 1 / v) * max(Fraction(1), reach)
    # the side the robot explores least far
    right = max((x for _, x in turns if x > 0), default=Fraction(0))
    left = max((-x for _, x in turns if x < 0), default=Fraction(0))
    side = Side.RIGHT if right <= left else Side.LEFT
    inst = Instance(d, v, side, Direction.TOWARD)
    lb = 1 + 1 / v
    return AdversaryWitness(inst, lb, "contracting", realized_cr=realized_cr(traj, inst, round_cap),
                            tolerance=lb * Fraction(1, 100))


def eps_speed_witness(traj: Trajectory, d, eps, round_cap: int = DEFAULT_ROUND_CAP) -> AdversaryWitness:
    """Slow target (speed eps/3) behind the first of ``±(d - eps)`` the robot reaches."""
    d, eps = as_fraction(d), as_fraction(eps)
    if d < 1 or not 0 < eps < d:
        raise ValueError("need d >= 1 and 0 < eps < d")
    v = eps / 3
    reach = _first_reach(traj, (d - eps, Fraction(0)), round_cap)
    if reach is None:
        inst = Instance(d, v, Side.LEFT, Direction.TOWARD)
        return AdversaryWitness(inst, math.inf, "eps-speed", realized_cr=realized_cr(traj, inst, round_cap))
    side = Side.of(reach[1]).opposite
    inst = Instance(d, v, side, Direction.TOWARD)
    return AdversaryWitness(inst, 3 - 3 * eps, "eps-speed", realized_cr=realized_cr(traj, inst, round_cap))


def departure(traj: Trajectory, round_cap: int = DEFAULT_ROUND_CAP):
    """(wait time, arrival time at the first excursion point, that point) or None."""
    for seg in traj.segments(round_cap):
        if seg.x1 == 0 and seg.x0 == 0:
            continue
        # first segment leaving the origin: follow it while the motion is monotone
        sgn = 1 if seg.x1 > 0 else -1
        t_arrive, x_far = seg.t1, seg.x1
        for nxt in traj.segments(round_cap):
            if nxt.index <= seg.index:
                continue
            if sgn * (nxt.x1 - nxt.x0) > 0:
                t_arrive, x_far = nxt.t1, nxt.x1
            else:
                break
        return seg.t0, t_arrive, x_far
    ray = traj.terminal
    if ray is not None and ray.velocity != 0 and (traj.is_finite or traj.zeno is not None):
        # a pure ray: pick the point reached one time unit after leaving
        return ray.t, ray.t + 1, ray.position(ray.t + 1)
    return None


def departure_witness(traj: Trajectory, d, round_cap: int = DEFAULT_ROUND_CAP) -> AdversaryWitness:
    """Target timed to reach the origin exactly when the robot reaches its first excursion point.

    Raises :class:`NoWitness` for a trajectory that never leaves the origin.
    """
    d = as_fraction(d)
    dep = departure(traj, round_cap)
    if dep is None:
        raise NoWitness("trajectory never leaves the origin; waiting is optimal")
    _, t_arrive, x_far = dep
    v = d / t_arrive
    side = Side.of(x_far).opposite
    inst = Instance(d, v, side, Direction.TOWARD)
    return AdversaryWitness(inst, 1 + 1 / v, "departure", realized_cr=realized_cr(traj, inst, round_cap))
