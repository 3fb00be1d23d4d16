"""Worst-case competitive ratio of a strategy over families of instances.

For a fixed trajectory, speed and side, the round/segment in which the target is
caught is a step function of the initial distance ``d``: breakpoint ``k`` at
``(t_k, x_k)`` catches every target with ``d <= side*x_k - drift*t_k`` that was
not caught earlier. Between consecutive thresholds the catch time is affine in
``d`` and so the ratio is monotone, which makes the supremum an endpoint value
or a one-sided limit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .bounds import (
    Ratio,
    analytic_cr_bound,
    waiting_bound,
    zigzag_limit_cr,
    no_speed_away_bound,
)
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
from .strategies import StrategySpec, Waiting, Zigzag

WITNESS_NUDGE = Fraction(1, 2 ** 40)


class RoundCapExceeded(RuntimeError):
    """The round cap ran out before every distance in the family was resolved."""


@dataclass(frozen=True)
class CatchPiece:
    """Distances ``d`` in (lo, hi] (or [lo, hi]) caught on the same segment.

    Catch time is ``alpha + beta * d``.
    """

    side: Side
    lo: Fraction
    lo_open: bool
    hi: Fraction
    segment: int
    round: int
    alpha: Fraction
    beta: Fraction

    def contains(self, d: Fraction) -> bool:
        return (self.lo < d if self.lo_open else self.lo <= d) and d <= self.hi

    def catch_time(self, d) -> Fraction:
        return self.alpha + self.beta * as_fraction(d)


@dataclass(frozen=True)
class PieceSup:
    piece: CatchPiece
    value: Fraction
    d: Fraction
    attained: bool


def _piece_sup(piece: CatchPiece, drift: Fraction) -> PieceSup:
    # ratio(d) = (1 - drift) * (beta + alpha / d): monotone in d
    def ratio(d):
        return (1 - drift) * (piece.beta + piece.alpha / d)

    if piece.alpha > 0 or (piece.alpha == 0 and not piece.lo_open):
        return PieceSup(piece, ratio(piece.lo), piece.lo, not piece.lo_open)
    return PieceSup(piece, ratio(piece.hi), piece.hi, True)


@dataclass
class CatchMap:
    side: Side
    pieces: list = field(default_factory=list)
    unresolved: list = field(default_factory=list)   # (lo, hi) ranges past the round cap
    no_catch: list = field(default_factory=list)     # (lo, hi) ranges never caught


def catch_map(traj: Trajectory, v, direction, side: Side, d_lo, d_hi,
              round_cap: int = DEFAULT_ROUND_CAP) -> CatchMap:
    """Partition ``[d_lo, d_hi]`` by the segment on which the target is caught."""
    v, d_lo, d_hi = as_fraction(v), as_fraction(d_lo), as_fraction(d_hi)
    direction, side = Direction.parse(direction), Side.parse(side)
    if d_lo < 1 or d_hi < d_lo:
        raise ValueError(f"bad distance interval [{d_lo}, {d_hi}]")
    drift = v if direction is Direction.AWAY else -v
    sigma = side.sign
    out = CatchMap(side)
    covered = Fraction(0)     # every d <= covered is caught earlier

    def emit(lo, hi, seg_index, rnd, alpha, beta):
        lo_open = True
        if lo < d_lo:
            lo, lo_open = d_lo, False
        hi = min(hi, d_hi)
        if lo < hi or (lo == hi and not lo_open):
            out.pieces.append(CatchPiece(side, lo, lo_open, hi, seg_index, rnd, alpha, beta))

    last_index = 0
    for seg in traj.segments(round_cap):
        last_index = seg.index + 1
        if covered >= d_hi:
            return out
        threshold = sigma * seg.x1 - drift * seg.t1
        if threshold > covered:
            rate = sigma * seg.slope - drift
            alpha = (sigma * seg.slope * seg.t0 - sigma * seg.x0) / rate
            emit(covered, threshold, seg.index, seg.round, alpha, 1 / rate)
            covered = threshold
    if covered >= d_hi:
        return out

    t_k, x_k = traj.breakpoint(last_index)
    if traj.zeno is not None:
        z = traj.zeno
        env = z.envelope(last_index)
        safe = env + sigma * z.position - min(drift * t_k, drift * z.time)
        if safe > covered:
            lo = max(covered, d_lo)
            hi = min(safe, d_hi)
            if lo < hi or (lo == hi and covered < lo):
                out.unresolved.append((lo, hi))
            covered = max(covered, safe)
        ray_round = round_cap
    else:
        if traj.breakpoint(last_index + 1) is not None:
            raise RoundCapExceeded(
                f"{traj!r}: distances above {float(covered):.6g} need more than {round_cap} rounds")
        if traj.terminal is None:
            out.no_catch.append((max(covered, d_lo), d_hi))
            return out
        ray_round = traj.terminal_round
        if ray_round >= round_cap:
            raise RoundCapExceeded(f"{traj!r}: terminal ray lies beyond round cap {round_cap}")
    if covered >= d_hi:
        return out
    ray = traj.terminal
    rate = sigma * ray.velocity - drift
    if rate <= 0:
        out.no_catch.append((max(covered, d_lo), d_hi))
        return out
    start = sigma * ray.x - drift * ray.t
    emit(covered, d_hi, last_index, ray_round, ray.t - start / rate, 1 / rate)
    return out


# -- families -------------------------------------------------------------------

def family_direction(spec: StrategySpec, direction=None) -> Direction:
    if direction is not None:
        return Direction.parse(direction)
    if spec.direction is None:
        raise ValueError(f"{spec.model} needs an explicit direction")
    return spec.direction


def spec_bound(spec: StrategySpec, v, direction=None, d=None) -> Ratio:
    """Analytic upper bound matching a strategy spec on a family."""
    v = as_fraction(v)
    direction = family_direction(spec, direction)
    if isinstance(spec, Waiting):
        return waiting_bound(v) if direction is Direction.TOWARD and v > 0 else math.inf
    if isinstance(spec, Zigzag):
        return zigzag_limit_cr(spec.a, v, direction)
    if spec.model == "full-toward":
        # the one-turn strategy keeps 1 + 2/(1+v) even past v = 1
        return 1 + Fraction(2) / (1 + v)
    if spec.model == "no-speed-away":
        return no_speed_away_bound(v) if spec.f.name == "pow2" else math.inf
    return analytic_cr_bound(spec.knowledge, direction, v, d)


@dataclass
class CrEvaluation:
    """Worst case of one strategy over an instance family."""

    spec: object
    family: dict
    empirical_sup: Ratio
    witness: Optional[Instance]
    witness_cr: Optional[Fraction]
    attained: bool
    analytic_bound: Ratio
    pieces: list = field(default_factory=list)
    unresolved: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def slack(self) -> Ratio:
        if self.analytic_bound == math.inf:
            return math.inf
        if isinstance(self.analytic_bound, float) or isinstance(self.empirical_sup, float):
            return float(self.analytic_bound) - float(self.empirical_sup)
        return self.analytic_bound - self.empirical_sup

    @property
    def within_bound(self) -> bool:
        if isinstance(self.analytic_bound, Fraction) and isinstance(self.empirical_sup, Fraction):
            return self.empirical_sup <= self.analytic_bound
        return float(self.empirical_sup) <= float(self.analytic_bound) * (1 + 1e-9)


def _witness_d(best: PieceSup) -> Fraction:
    if best.attained:
        return best.d
    d = best.d * (1 + WITNESS_NUDGE)
    if d > best.piece.hi:
        d = (best.d + best.piece.hi) / 2
    return d


def _select(sups: Iterable[PieceSup]) -> Optional[PieceSup]:
    # deterministic: max of (ratio, d, side) regardless of evaluation order
    return max(sups, key=lambda s: (s.value, s.d, s.piece.side.sign), default=None)


def sup_cr_over_d(spec: Union[StrategySpec, Trajectory], v, d_interval, direction=None,
                  round_cap: int = DEFAULT_ROUND_CAP, sides: Sequence[Side] = (Side.LEFT, Side.RIGHT)) -> CrEvaluation:
    """Exact supremum of the competitive ratio over ``d`` in an interval and both sides.

    Strategies that are told ``d`` are scale invariant (trajectory and target both
    scale with ``d``), so they are evaluated at the interval endpoints and the two
    values are required to agree.
    """
    v = as_fraction(v)
    d_lo, d_hi = (as_fraction(x) for x in d_interval)
    if isinstance(spec, Trajectory):
        if direction is None:
            raise ValueError("a bare trajectory needs an explicit direction")
        direction = Direction.parse(direction)
        traj = spec
        bound = math.inf
    else:
        direction = family_direction(spec, direction)
        bound = spec_bound(spec, v, direction, d_lo)
        if "d" in spec.knows:
            return _sup_scale_invariant(spec, v, d_lo, d_hi, direction, round_cap, sides, bound)
        traj = spec.with_knowledge(v=v).build()
    drift = v if direction is Direction.AWAY else -v
    family = dict(direction=direction.value, v=v, d_lo=d_lo, d_hi=d_hi)
    sups, unresolved, violations = [], [], []
    for side in sides:
        cmap = catch_map(traj, v, direction, side, d_lo, d_hi, round_cap)
        sups.extend(_piece_sup(p, drift) for p in cmap.pieces)
        unresolved.extend((side, lo, hi) for lo, hi in cmap.unresolved)
        violations.extend((side, lo, hi) for lo, hi in cmap.no_catch)
    best = _select(sups)
    if best is None:
        return CrEvaluation(spec, family, math.inf, None, None, False, bound, sups, unresolved, violations)
    wd = _witness_d(best)
    witness = Instance(wd, v, best.piece.side, direction)
    res = first_catch(traj, witness, round_cap)
    wcr = None if isinstance(res, NoCatch) else res.time / optimal_offline_time(witness)
    return CrEvaluation(spec, family, best.value, witness, wcr, best.attained, bound,
                        sups, unresolved, violations)


def _sup_scale_invariant(spec, v, d_lo, d_hi, direction, round_cap, sides, bound):
    family = dict(direction=direction.value, v=v, d_lo=d_lo, d_hi=d_hi)
    results = []
    violations = []
    for d in sorted({d_lo, d_hi}):
        traj = spec.with_knowledge(v=v, d=d).build()
        for side in sides:
            inst = Instance(d, v, side, direction)
            res = first_catch(traj, inst, round_cap)
            if isinstance(res, NoCatch):
                violations.append((side, d, d))
                continue
            results.append((res.time / optimal_offline_time(inst), d, side.sign, inst))
    if not results:
        return CrEvaluation(spec, family, math.inf, None, None, False, bound, [], [], violations)
    per_side = {}
    for cr, d, s, _ in results:
        per_side.setdefault(s, set()).add(cr)
    if any(len(vals) > 1 for vals in per_side.values()):
        raise AssertionError(f"{spec.model}: ratio depends on d, scale invariance broken")
    cr, d, s, inst = max(results, key=lambda r: r[:3])
    return CrEvaluation(spec, family, cr, inst, cr, True, bound, [], [], violations)


def sup_cr_sweep(spec: Union[StrategySpec, Trajectory], v_grid, d_grid, direction=None,
                 round_cap: int = DEFAULT_ROUND_CAP,
                 sides: Sequence[Side] = (Side.LEFT, Side.RIGHT)) -> CrEvaluation:
    """Grid maximum of the ratio, reported as a float.

    Catch times are still exact; NoCatch instances are kept in ``violations``.
    """
    best = None
    violations = []
    count = 0
    vs = [as_fraction(v) for v in v_grid]
    ds = sorted(as_fraction(d) for d in d_grid)
    direction_ = None
    bounds = []
    for v in vs:
        if isinstance(spec, Trajectory):
            direction_ = Direction.parse(direction)
            traj_for = lambda d, _t=spec: _t
        else:
            direction_ = family_direction(spec, direction)
            bounds.append(spec_bound(spec, v, direction_, ds[0]))
            if "d" in spec.knows:
                traj_for = lambda d, _s=spec, _v=v: _s.with_knowledge(v=_v, d=d).build()
            else:
                fixed = spec.with_knowledge(v=v).build()
                traj_for = lambda d, _t=fixed: _t
        for d in ds:
            traj = traj_for(d)
            for side in sides:
                inst = Instance(d, v, side, direction_)
                res = first_catch(traj, inst, round_cap)
                count += 1
                if isinstance(res, NoCatch):
                    violations.append(res)
                    continue
                cr = res.time / optimal_offline_time(inst)
                key = (cr, d, side.sign)
                if best is None or key > best[0]:
                    best = (key, inst)
    bound = max(bounds, key=float, default=math.inf)
    family = dict(direction=direction_.value if direction_ else None, v=vs, d_lo=ds[0], d_hi=ds[-1], grid=count)
    if best is None:
        return CrEvaluation(spec, family, math.inf, None, None, False, bound, violations=violations)
    cr = best[0][0]
    return CrEvaluation(spec, family, float(cr), best[1], cr, True, bound, violations=violations)
