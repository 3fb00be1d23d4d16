"""Search strategies as lazily generated trajectories.

Every constructor returns a :class:`~linepursuit.kinematics.Trajectory`; the
tagged :class:`StrategySpec` variants describe them declaratively and round-trip
through JSON.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from typing import Callable, ClassVar, Iterator, Optional, Sequence

from .kinematics import (
    Direction,
    Ray,
    Side,
    Trajectory,
    ZenoTail,
    as_fraction,
    format_fraction,
    waiting_trajectory,
)

ONE_THIRD = Fraction(1, 3)


class ExponentSeq:
    """Strictly increasing integer sequence ``i -> e_i`` with a fixed seed ``e_0``.

    ``seed`` overrides the rule at ``i = 0``. Values are cached so repeated lookups
    are cheap; finite (list-backed) sequences raise IndexError past their end.
    """

    def __init__(self, rule: Callable[[int], int], *, seed: Optional[int] = None,
                 name: str = "custom", length: Optional[int] = None):
        self._rule = rule
        self.seed = seed
        self.name = name
        self.length = length
        self._cache: dict[int, int] = {}

    @classmethod
    def pow2(cls, seed: Optional[int] = None) -> "ExponentSeq":
        return cls(lambda i: 2 ** i, seed=seed, name="pow2")

    @classmethod
    def linear(cls, seed: Optional[int] = None) -> "ExponentSeq":
        return cls(lambda i: i + 1, seed=seed, name="linear")

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "ExponentSeq":
        vals = [int(x) for x in values]
        if any(int(x) != x for x in values):
            raise ValueError("exponent sequences hold integers")
        return cls(vals.__getitem__, name="list", length=len(vals))

    def __call__(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        if i not in self._cache:
            if i == 0 and self.seed is not None:
                val = self.seed
            else:
                if self.length is not None and i >= self.length:
                    raise IndexError(f"exponent sequence has only {self.length} terms")
                val = int(self._rule(i))
            self._cache[i] = val
        return self._cache[i]

    def prefix(self, n: int) -> list[int]:
        return [self(i) for i in range(n)]

    def validate(self, first: int, n_check: int = 16) -> None:
        """Check the seed and monotonicity on a prefix; raises ValueError."""
        if self(0) != first:
            raise ValueError(f"sequence must start at {first}, got {self(0)}")
        n = n_check if self.length is None else min(n_check, self.length)
        vals = self.prefix(n)
        for i in range(len(vals) - 1):
            if vals[i] >= vals[i + 1]:
                raise ValueError(f"sequence not strictly increasing at index {i}: {vals[i]} >= {vals[i + 1]}")

    def to_json(self):
        if self.name in ("pow2", "linear"):
            return self.name
        n = self.length if self.length is not None else 16
        return self.prefix(n)

    def __eq__(self, other):
        if not isinstance(other, ExponentSeq):
            return NotImplemented
        return self.to_json() == other.to_json() and self.seed == other.seed

    def __hash__(self):
        return hash((str(self.to_json()), self.seed))

    def __repr__(self):
        return f"ExponentSeq({self.name}, seed={self.seed})"


def speed_seq() -> ExponentSeq:
    """Canonical speed-guess exponents ``f_i = 2**i`` (so ``f_0 = 1``)."""
    return ExponentSeq.pow2()


def distance_seq() -> ExponentSeq:
    """Canonical distance-guess exponents ``g_i = 2**i`` with the seed ``g_0 = 0``."""
    return ExponentSeq.pow2(seed=0)


def parse_seq(value, *, kind: str = "f") -> ExponentSeq:
    seed = 0 if kind == "g" else None
    if value is None or value == "pow2":
        return ExponentSeq.pow2(seed=seed)
    if value == "linear":
        return ExponentSeq.linear(seed=seed)
    if isinstance(value, str):
        value = [int(x) for x in value.replace(";", ",").split(",") if x.strip()]
    return ExponentSeq.from_list(value)


@dataclass(frozen=True)
class RoundState:
    """Bookkeeping for one out-and-back round of the guessing strategies."""

    i: int
    v_i: Fraction
    d_i: Fraction
    x_i: Fraction
    elapsed: Fraction
    d_guess: Fraction

    @property
    def side(self) -> Side:
        return Side.RIGHT if self.x_i > 0 else Side.LEFT


def guess_speed(f_i: int) -> Fraction:
    return 1 - Fraction(1, 2 ** f_i)


def guessing_rounds(f: ExponentSeq, distance_guess: Callable[[int], Fraction],
                    first: Side = Side.RIGHT) -> Iterator[RoundState]:
    """Rounds of the speed (and distance) guessing searches.

    Elapsed time before round ``i`` is the full out-and-back time ``2 * sum(|x_j|)``.
    """
    elapsed = Fraction(0)
    sign = first.sign
    for i in itertools.count():
        try:
            v_i = guess_speed(f(i))
            dg = distance_guess(i)
        except IndexError:
            return
        d_i = dg + elapsed * v_i
        leg = d_i / (1 - v_i)
        yield RoundState(i, v_i, d_i, sign * leg, elapsed, dg)
        elapsed += 2 * leg
        sign = -sign


def _out_and_back(legs: Iterator[tuple[int, Fraction]]):
    """Breakpoints for legs origin -> x -> origin, tagged with the leg's round."""
    t = Fraction(0)
    for rnd, x in legs:
        t += abs(x)
        yield t, x, rnd
        t += abs(x)
        yield t, Fraction(0), rnd


def _one_turn(turn_time: Fraction, first: Side, label: str) -> Trajectory:
    x = first.sign * turn_time
    return Trajectory([(turn_time, x, 0)], Ray(turn_time, x, -first.sign), label=label)


def make_full_away(v, d, first: Side = Side.RIGHT) -> Trajectory:
    v, d, first = as_fraction(v), as_fraction(d), Side.parse(first)
    if not 0 <= v < 1:
        raise ValueError(f"full-away needs 0 <= v < 1, got {v}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return _one_turn(d / (1 - v), first, f"full-away(v={v}, d={d})")


def make_full_toward(v, d, first: Side = Side.RIGHT) -> Trajectory:
    v, d, first = as_fraction(v), as_fraction(d), Side.parse(first)
    if v <= 0:
        raise ValueError(f"full-toward needs v > 0, got {v}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return _one_turn(d / (1 + v), first, f"full-toward(v={v}, d={d})")


def make_waiting() -> Trajectory:
    return waiting_trajectory()


def make_zigzag(a, first: Side = Side.RIGHT) -> Trajectory:
    """Doubling-style search with turning points ``±a**i`` on alternating sides.

    For ``a < 1`` the turning times accumulate at ``2 / (1 - a)``; the robot then
    rests at the origin.
    """
    a, first = as_fraction(a), Side.parse(first)
    if a <= 0:
        raise ValueError(f"expansion ratio must be > 0, got {a} (use make_waiting for a = 0)")
    s = first.sign
    legs = ((i, s * (-1) ** i * a ** i) for i in itertools.count())
    label = f"zigzag(a={a})"
    if a < 1:
        limit = 2 / (1 - a)

        def envelope(k: int) -> Fraction:
            # breakpoint k lies in round (k - 1) // 2; later excursions are smaller
            return a ** max((k - 1) // 2, 0)

        return Trajectory(_out_and_back(legs), Ray(limit, 0, 0),
                          zeno=ZenoTail(limit, Fraction(0), envelope), label=label)
    return Trajectory(_out_and_back(legs), label=label)


def no_dist_toward_ratio(v) -> Fraction:
    v = as_fraction(v)
    return 2 * (1 - v) / (1 + v)


def make_no_dist_toward(v, first: Side = Side.RIGHT) -> Trajectory:
    v = as_fraction(v)
    if v <= 0:
        raise ValueError(f"v must be > 0, got {v}")
    if v >= ONE_THIRD:
        return make_waiting()
    return make_zigzag(no_dist_toward_ratio(v), first)


def no_speed_away_rounds(d, f: Optional[ExponentSeq] = None, first: Side = Side.RIGHT) -> Iterator[RoundState]:
    d = as_fraction(d)
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    f = f or speed_seq()
    f.validate(1)
    return guessing_rounds(f, lambda i: d, Side.parse(first))


def make_no_speed_away(d, f: Optional[ExponentSeq] = None, first: Side = Side.RIGHT) -> Trajectory:
    rounds = no_speed_away_rounds(d, f, first)
    return Trajectory(_out_and_back((r.i, r.x_i) for r in rounds),
                      label=f"no-speed-away(d={as_fraction(d)})")


def make_no_speed_toward(d, first: Side = Side.RIGHT) -> Trajectory:
    d = as_fraction(d)
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return _one_turn(d, Side.parse(first), f"no-speed-toward(d={d})")


def no_knowledge_away_rounds(f: Optional[ExponentSeq] = None, g: Optional[ExponentSeq] = None,
                             first: Side = Side.RIGHT) -> Iterator[RoundState]:
    f = f or speed_seq()
    g = g or distance_seq()
    f.validate(1)
    g.validate(0)
    return guessing_rounds(f, lambda i: Fraction(2) ** g(i), Side.parse(first))


def make_no_knowledge_away(f: Optional[ExponentSeq] = None, g: Optional[ExponentSeq] = None,
                           first: Side = Side.RIGHT) -> Trajectory:
    rounds = no_knowledge_away_rounds(f, g, first)
    return Trajectory(_out_and_back((r.i, r.x_i) for r in rounds), label="no-knowledge-away")


# -- declarative specs --------------------------------------------------------

@dataclass(frozen=True)
class StrategySpec:
    """Base for the tagged strategy descriptions.

    ``knows`` lists the instance parameters the strategy is built from; analysis
    code fills them in from the family being evaluated.
    """

    model: ClassVar[str] = ""
    direction: ClassVar[Optional[Direction]] = None
    knows: ClassVar[tuple] = ()
    knowledge: ClassVar[str] = ""

    def __post_init__(self):
        for fld in fields(self):
            val = getattr(self, fld.name)
            if fld.name in ("v", "d", "a"):
                object.__setattr__(self, fld.name, as_fraction(val))
            elif fld.name == "first":
                object.__setattr__(self, fld.name, Side.parse(val))
            elif fld.name == "f" and val is None:
                object.__setattr__(self, fld.name, speed_seq())
            elif fld.name == "g" and val is None:
                object.__setattr__(self, fld.name, distance_seq())
        self._check()

    def _check(self):
        # builders validate their parameters eagerly and generate breakpoints lazily
        self.build()

    def build(self) -> Trajectory:
        raise NotImplementedError

    def with_knowledge(self, v=None, d=None) -> "StrategySpec":
        changes = {}
        if "v" in self.knows and v is not None:
            changes["v"] = as_fraction(v)
        if "d" in self.knows and d is not None:
            changes["d"] = as_fraction(d)
        return replace(self, **changes) if changes else self

    def to_dict(self) -> dict:
        out = {"model": self.model}
        if self.direction is not None:
            out["direction"] = self.direction.value
        for fld in fields(self):
            val = getattr(self, fld.name)
            if isinstance(val, Fraction):
                out[fld.name] = format_fraction(val)
            elif isinstance(val, Side):
                out[fld.name] = val.letter
            elif isinstance(val, ExponentSeq):
                out[fld.name] = val.to_json()
            elif isinstance(val, Direction):
                out[fld.name] = val.value
            else:
                out[fld.name] = val
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class FullAway(StrategySpec):
    v: Fraction = Fraction(0)
    d: Fraction = Fraction(1)
    first: Side = Side.RIGHT
    model: ClassVar[str] = "full-away"
    direction: ClassVar[Direction] = Direction.AWAY
    knows: ClassVar[tuple] = ("v", "d")
    knowledge: ClassVar[str] = "full"

    def build(self):
        return make_full_away(self.v, self.d, self.first)


@dataclass(frozen=True)
class FullToward(StrategySpec):
    v: Fraction = Fraction(1, 2)
    d: Fraction = Fraction(1)
    first: Side = Side.RIGHT
    model: ClassVar[str] = "full-toward"
    direction: ClassVar[Direction] = Direction.TOWARD
    knows: ClassVar[tuple] = ("v", "d")
    knowledge: ClassVar[str] = "full"

    def build(self):
        return make_full_toward(self.v, self.d, self.first)


@dataclass(frozen=True)
class Waiting(StrategySpec):
    model: ClassVar[str] = "waiting"
    direction: ClassVar[Direction] = Direction.TOWARD
    knowledge: ClassVar[str] = "none"

    def build(self):
        return make_waiting()


@dataclass(frozen=True)
class Zigzag(StrategySpec):
    a: Fraction = Fraction(2)
    first: Side = Side.RIGHT
    model: ClassVar[str] = "zigzag"
    knowledge: ClassVar[str] = "no-distance"

    def build(self):
        return make_zigzag(self.a, self.first)


@dataclass(frozen=True)
class NoDistToward(StrategySpec):
    v: Fraction = Fraction(1, 5)
    first: Side = Side.RIGHT
    model: ClassVar[str] = "no-dist-toward"
    direction: ClassVar[Direction] = Direction.TOWARD
    knows: ClassVar[tuple] = ("v",)
    knowledge: ClassVar[str] = "no-distance"

    def build(self):
        return make_no_dist_toward(self.v, self.first)


@dataclass(frozen=True)
class NoSpeedAway(StrategySpec):
    d: Fraction = Fraction(1)
    f: ExponentSeq = None
    first: Side = Side.RIGHT
    model: ClassVar[str] = "no-speed-away"
    direction: ClassVar[Direction] = Direction.AWAY
    knows: ClassVar[tuple] = ("d",)
    knowledge: ClassVar[str] = "no-speed"

    def build(self):
        return make_no_speed_away(self.d, self.f, self.first)


@dataclass(frozen=True)
class NoSpeedToward(StrategySpec):
    d: Fraction = Fraction(1)
    first: Side = Side.RIGHT
    model: ClassVar[str] = "no-speed-toward"
    direction: ClassVar[Direction] = Direction.TOWARD
    knows: ClassVar[tuple] = ("d",)
    knowledge: ClassVar[str] = "no-speed"

    def build(self):
        return make_no_speed_toward(self.d, self.first)


@dataclass(frozen=True)
class NoKnowledgeAway(StrategySpec):
    f: ExponentSeq = None
    g: ExponentSeq = None
    first: Side = Side.RIGHT
    model: ClassVar[str] = "no-knowledge-away"
    direction: ClassVar[Direction] = Direction.AWAY
    knowledge: ClassVar[str] = "none"

    def build(self):
        return make_no_knowledge_away(self.f, self.g, self.first)


SPEC_TYPES = {cls.model: cls for cls in
              (FullAway, FullToward, Waiting, Zigzag, NoDistToward, NoSpeedAway, NoSpeedToward, NoKnowledgeAway)}


def make_strategy(spec: StrategySpec) -> Trajectory:
    return spec.build()


def spec_from_dict(data: dict) -> StrategySpec:
    """Build a spec from the JSON object used by the CLI.

    Keys not used by the chosen model are ignored; ``seq`` feeds the speed
    sequence (and, for the no-knowledge model, the distance sequence as well
    unless ``gseq`` is given).
    """
    model = data.get("model")
    if model not in SPEC_TYPES:
        raise ValueError(f"unknown model {model!r}; expected one of {sorted(SPEC_TYPES)}")
    cls = SPEC_TYPES[model]
    kwargs = {}
    names = {fld.name for fld in fields(cls)}
    for key in ("v", "d", "a"):
        if key in names and data.get(key) is not None:
            kwargs[key] = as_fraction(data[key])
    if "first" in names and data.get("first") is not None:
        kwargs["first"] = Side.parse(data["first"])
    if "f" in names:
        kwargs["f"] = parse_seq(data.get("f", data.get("seq")), kind="f")
    if "g" in names:
        kwargs["g"] = parse_seq(data.get("g", data.get("gseq", data.get("seq"))), kind="g")
    return cls(**kwargs)


def spec_from_json(text: str) -> StrategySpec:
    return spec_from_dict(json.loads(text))
