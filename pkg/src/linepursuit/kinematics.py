"""Exact kinematics for a unit-speed robot chasing an oblivious target on a line.

All instance parameters, breakpoints and catch times are :class:`fractions.Fraction`
values. Floating point never enters this module.
"""
from __future__ import annotations

import csv
import enum
import io
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Union

DEFAULT_ROUND_CAP = 64

Number = Union[int, Fraction, str]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, decimal strings and ``p/q`` strings to a Fraction.

    Floats are accepted but converted exactly (binary expansion), so callers that
    care about 1/3-style boundaries should pass strings.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Direction(enum.Enum):
    TOWARD = "toward"
    AWAY = "away"

    @classmethod
    def parse(cls, value: "Direction | str") -> "Direction":
        if isinstance(value, Direction):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise ValueError(f"unknown direction {value!r} (expected 'toward' or 'away')") from None


class Side(enum.Enum):
    LEFT = -1
    RIGHT = 1

    @property
    def sign(self) -> int:
        return self.value

    @property
    def opposite(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT

    @property
    def letter(self) -> str:
        return "L" if self is Side.LEFT else "R"

    @classmethod
    def parse(cls, value: "Side | str | int") -> "Side":
        if isinstance(value, Side):
            return value
        if isinstance(value, int):
            return cls(1 if value > 0 else -1)
        key = value.strip().upper()
        if key in ("L", "LEFT", "-1"):
            return cls.LEFT
        if key in ("R", "RIGHT", "1", "+1"):
            return cls.RIGHT
        raise ValueError(f"unknown side {value!r} (expected 'L' or 'R')")

    @classmethod
    def of(cls, x: Fraction) -> "Side":
        if x == 0:
            raise ValueError("the origin has no side")
        return cls.RIGHT if x > 0 else cls.LEFT


@dataclass(frozen=True)
class Instance:
    """One pursuit scenario: target starts at ``side.sign * d`` and moves at speed ``v``.

    ``v = 0`` is admitted as the static (cow-path) target.
    """

    d: Fraction
    v: Fraction
    side: Side = Side.RIGHT
    direction: Direction = Direction.AWAY

    def __post_init__(self):
        object.__setattr__(self, "d", as_fraction(self.d))
        object.__setattr__(self, "v", as_fraction(self.v))
        object.__setattr__(self, "side", Side.parse(self.side))
        object.__setattr__(self, "direction", Direction.parse(self.direction))
        if self.d < 1:
            raise ValueError(f"initial distance must be >= 1, got {self.d}")
        if self.v < 0:
            raise ValueError(f"target speed must be >= 0, got {self.v}")
        if self.direction is Direction.AWAY and self.v >= 1:
            raise ValueError(f"an away-moving target needs v < 1, got {self.v}")

    @property
    def p(self) -> Fraction:
        """Signed initial position."""
        return self.side.sign * self.d

    @property
    def velocity(self) -> Fraction:
        if self.direction is Direction.TOWARD:
            return -self.side.sign * self.v
        return self.side.sign * self.v

    @property
    def drift(self) -> Fraction:
        """Rate of change of the target's distance along its own side (+v away, -v toward)."""
        return self.v if self.direction is Direction.AWAY else -self.v

    def mirrored(self) -> "Instance":
        return Instance(self.d, self.v, self.side.opposite, self.direction)


def target_position(inst: Instance, t) -> Fraction:
    t = as_fraction(t)
    if t < 0:
        raise ValueError("time must be non-negative")
    return inst.p + inst.velocity * t


def optimal_offline_time(inst: Instance) -> Fraction:
    """Time needed by a robot that knows the target's initial position."""
    if inst.direction is Direction.AWAY:
        return inst.d / (1 - inst.v)
    return inst.d / (1 + inst.v)


@dataclass(frozen=True)
class Ray:
    """Open-ended final motion ``x(t) = x + velocity * (t - t0)`` for ``t >= t0``."""

    t: Fraction
    x: Fraction
    velocity: Fraction

    def __post_init__(self):
        for name in ("t", "x", "velocity"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if abs(self.velocity) > 1:
            raise ValueError(f"ray speed {self.velocity} exceeds the robot speed 1")

    def position(self, t: Fraction) -> Fraction:
        return self.x + self.velocity * (t - self.t)


@dataclass(frozen=True)
class ZenoTail:
    """Breakpoints accumulating at a finite time.

    ``envelope(k)`` bounds ``|x(t) - position|`` for every ``t`` between breakpoint
    ``k`` and ``time``. The terminal ray of such a trajectory starts at the limit.
    """

    time: Fraction
    position: Fraction
    envelope: Callable[[int], Fraction]


@dataclass(frozen=True)
class Segment:
    index: int
    round: int
    t0: Fraction
    x0: Fraction
    t1: Fraction
    x1: Fraction

    @property
    def slope(self) -> Fraction:
        return (self.x1 - self.x0) / (self.t1 - self.t0)

    def position(self, t: Fraction) -> Fraction:
        return self.x0 + self.slope * (t - self.t0)


class Trajectory:
    """Piecewise-linear robot path starting at (0, 0).

    ``points`` yields ``(t, x, round)`` for breakpoints after the origin; it may be
    infinite and is consumed lazily into a memoized prefix. The segment ending at a
    breakpoint carries that breakpoint's round tag.
    """

    def __init__(
        self,
        points: Iterable[tuple] = (),
        terminal: Optional[Ray] = None,
        *,
        zeno: Optional[ZenoTail] = None,
        label: str = "",
        terminal_round: Optional[int] = None,
    ):
        self._source: Optional[Iterator] = iter(points)
        self._times = [Fraction(0)]
        self._xs = [Fraction(0)]
        self._rounds = [0]
        self._lock = threading.Lock()
        self.terminal = terminal
        self.zeno = zeno
        self.label = label
        self._terminal_round = terminal_round
        if terminal is not None and zeno is not None and terminal.t != zeno.time:
            raise ValueError("a Zeno trajectory's terminal ray must start at the accumulation time")

    def __repr__(self):
        return f"Trajectory({self.label or 'custom'})"

    def _extend_to(self, k: int) -> bool:
        """Make breakpoint ``k`` available; False if the path has fewer breakpoints."""
        if k < len(self._times):
            return True
        with self._lock:
            while len(self._times) <= k:
                if self._source is None:
                    return False
                try:
                    t, x, rnd = next(self._source)
                except StopIteration:
                    self._source = None
                    self._check_terminal()
                    return False
                t, x = as_fraction(t), as_fraction(x)
                dt = t - self._times[-1]
                if dt <= 0:
                    raise ValueError(f"breakpoint times must increase strictly (t={t})")
                if abs(x - self._xs[-1]) > dt:
                    raise ValueError(f"segment ending at t={t} exceeds unit speed")
                self._times.append(t)
                self._xs.append(x)
                self._rounds.append(int(rnd))
            return True

    def _check_terminal(self):
        ray = self.terminal
        if ray is None or self.zeno is not None:
            return
        if ray.t != self._times[-1] or ray.x != self._xs[-1]:
            raise ValueError("terminal ray must start at the last breakpoint")

    def breakpoint(self, k: int) -> Optional[tuple]:
        if not self._extend_to(k):
            return None
        return self._times[k], self._xs[k]

    def breakpoints(self, limit: Optional[int] = None) -> Iterator[tuple]:
        k = 0
        while limit is None or k < limit:
            if not self._extend_to(k):
                return
            yield self._times[k], self._xs[k], self._rounds[k]
            k += 1

    def segments(self, round_cap: Optional[int] = None) -> Iterator[Segment]:
        k = 0
        while self._extend_to(k + 1):
            rnd = self._rounds[k + 1]
            if round_cap is not None and rnd >= round_cap:
                return
            yield Segment(k, rnd, self._times[k], self._xs[k], self._times[k + 1], self._xs[k + 1])
            k += 1

    @property
    def is_finite(self) -> bool:
        """True once the breakpoint source has been exhausted."""
        return self._source is None

    def num_breakpoints(self) -> int:
        """Number of breakpoints; forces the whole source (finite paths only)."""
        k = len(self._times)
        while self._extend_to(k):
            k += 1
        return len(self._times)

    @property
    def terminal_round(self) -> int:
        if self._terminal_round is not None:
            return self._terminal_round
        if self._source is not None:
            raise ValueError("terminal round is undefined while breakpoints remain")
        return self._rounds[-1] + 1 if len(self._rounds) > 1 else 0

    def position(self, t) -> Fraction:
        t = as_fraction(t)
        if t < 0:
            raise ValueError("time must be non-negative")
        if self.zeno is not None and t >= self.zeno.time:
            return self.terminal.position(t) if self.terminal else self.zeno.position
        k = 0
        while self._extend_to(k + 1):
            if self._times[k + 1] >= t:
                t0, t1 = self._times[k], self._times[k + 1]
                x0, x1 = self._xs[k], self._xs[k + 1]
                return x0 + (x1 - x0) * (t - t0) / (t1 - t0)
            k += 1
        if self.terminal is not None and t >= self.terminal.t:
            return self.terminal.position(t)
        if t == self._times[k]:
            return self._xs[k]
        raise ValueError(f"trajectory undefined at t={t}")


def waiting_trajectory() -> Trajectory:
    return Trajectory((), Ray(0, 0, 0), label="waiting", terminal_round=0)


@dataclass(frozen=True)
class CatchResult:
    time: Fraction
    position: Fraction
    round: int
    segment: int


@dataclass(frozen=True)
class NoCatch:
    """Returned instead of a CatchResult when no meeting occurs within the round cap."""

    reason: str
    rounds_scanned: int = 0
    time_scanned: Fraction = Fraction(0)
    instance: Optional[Instance] = None

    def __bool__(self):
        return False


class NoCatchError(RuntimeError):
    def __init__(self, nocatch: NoCatch):
        super().__init__(nocatch.reason)
        self.nocatch = nocatch


def _root(t0, g0, t1, g1) -> Fraction:
    return t0 + g0 * (t1 - t0) / (g0 - g1)


def first_catch(traj: Trajectory, inst: Instance, round_cap: int = DEFAULT_ROUND_CAP):
    """Earliest meeting of ``traj`` with the target of ``inst``.

    Segments are scanned in time order and the linear gap equation is solved
    exactly on each one. Returns a :class:`CatchResult` or a :class:`NoCatch`.
    """
    if round_cap < 1:
        raise ValueError("round_cap must be >= 1")
    p, w = inst.p, inst.velocity
    last = None
    for seg in traj.segments(round_cap):
        last = seg
        g0 = seg.x0 - (p + w * seg.t0)
        if g0 == 0:
            return CatchResult(seg.t0, seg.x0, seg.round, seg.index)
        g1 = seg.x1 - (p + w * seg.t1)
        if g1 == 0 or (g1 > 0) != (g0 > 0):
            t = _root(seg.t0, g0, seg.t1, g1)
            return CatchResult(t, p + w * t, seg.round, seg.index)

    k = last.index + 1 if last is not None else 0
    t_end = traj._times[k] if k < len(traj._times) else traj._times[-1]
    if traj.zeno is not None:
        if not _zeno_gap_clear(traj, inst, k):
            return NoCatch("round cap reached inside the accumulating part of the path",
                           round_cap, t_end, inst)
        return _catch_on_ray(traj, inst, k, round_cap, t_end, ray_round=round_cap)

    if traj._extend_to(k + 1):
        return NoCatch(f"no meeting within {round_cap} rounds", round_cap, t_end, inst)
    if traj.terminal is None:
        return NoCatch("trajectory ends without a meeting", traj._rounds[-1] + 1, t_end, inst)
    if traj.terminal_round >= round_cap:
        return NoCatch(f"no meeting within {round_cap} rounds", round_cap, t_end, inst)
    return _catch_on_ray(traj, inst, k, round_cap, t_end, ray_round=traj.terminal_round)


def _zeno_gap_clear(traj: Trajectory, inst: Instance, k: int) -> bool:
    """True if the target provably stays clear of the robot from breakpoint k to the limit."""
    z = traj.zeno
    env = z.envelope(k)
    t0 = traj._times[k]
    lo = z.position - env
    hi = z.position + env
    a = target_position(inst, t0)
    b = target_position(inst, z.time)
    return min(a, b) > hi or max(a, b) < lo


def _catch_on_ray(traj, inst, k, round_cap, t_end, ray_round):
    ray = traj.terminal
    if ray is None:
        return NoCatch("trajectory ends without a meeting", round_cap, t_end, inst)
    p, w = inst.p, inst.velocity
    g0 = ray.x - (p + w * ray.t)
    if g0 == 0:
        return CatchResult(ray.t, ray.x, ray_round, k)
    rate = ray.velocity - w
    if rate == 0 or (rate > 0) == (g0 > 0):
        return NoCatch("the terminal ray never meets the target", ray_round + 1, ray.t, inst)
    t = ray.t - g0 / rate
    return CatchResult(t, p + w * t, ray_round, k)


def instance_cr(traj: Trajectory, inst: Instance, round_cap: int = DEFAULT_ROUND_CAP) -> Fraction:
    """Exact competitive ratio of ``traj`` on a single instance.

    Raises :class:`NoCatchError` when the target is not caught within the cap.
    """
    res = first_catch(traj, inst, round_cap)
    if isinstance(res, NoCatch):
        raise NoCatchError(res)
    return res.time / optimal_offline_time(inst)


# -- trajectory files ---------------------------------------------------------

def read_trajectory_csv(source) -> Trajectory:
    """Parse the ``t,x`` breakpoint CSV (optional trailing ``ray,t,x,velocity`` row).

    ``source`` is a path or an open text stream. Rows are validated for strictly
    increasing times and the unit speed bound.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, newline="", encoding="utf-8") as fh:
            return read_trajectory_csv(fh)
    rows = [r for r in csv.reader(source) if r and any(c.strip() for c in r)]
    if not rows or [c.strip().lower() for c in rows[0]] != ["t", "x"]:
        raise ValueError("trajectory file must start with the header 't,x'")
    points = []
    ray = None
    for lineno, row in enumerate(rows[1:], start=2):
        cells = [c.strip() for c in row]
        if ray is not None:
            raise ValueError(f"line {lineno}: rows after the ray declaration")
        try:
            if cells[0].lower() == "ray":
                if len(cells) != 4:
                    raise ValueError("ray row needs ray,<t>,<x>,<velocity>")
                ray = Ray(*(Fraction(c) for c in cells[1:]))
                continue
            if len(cells) != 2:
                raise ValueError("expected two columns")
            points.append((Fraction(cells[0]), Fraction(cells[1])))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if not points or points[0] != (0, 0):
        raise ValueError("first breakpoint must be 0,0")
    traj = Trajectory(((t, x, i) for i, (t, x) in enumerate(points[1:])), ray, label="file")
    traj.num_breakpoints()  # validate eagerly
    return traj


def write_trajectory_csv(traj: Trajectory, max_breakpoints: Optional[int] = None,
                         horizon: Optional[Fraction] = None) -> str:
    """Render a (prefix of a) trajectory in the ``t,x`` CSV format.

    Infinite trajectories need ``max_breakpoints`` or ``horizon``; the prefix is
    written without a ray row.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "x"])
    n = 0
    for t, x, _ in traj.breakpoints(max_breakpoints):
        if horizon is not None and t > horizon:
            break
        w.writerow([format_fraction(t), format_fraction(x)])
        n += 1
    if traj.is_finite and traj.terminal is not None and traj.zeno is None \
            and (max_breakpoints is None or n >= traj.num_breakpoints()):
        r = traj.terminal
        w.writerow(["ray", format_fraction(r.t), format_fraction(r.x), format_fraction(r.velocity)])
    return buf.getvalue()
