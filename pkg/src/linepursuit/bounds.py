"""Closed-form competitive-ratio bounds for the eight knowledge/movement models.

Values are exact Fractions whenever the formula is rational in its inputs and
Python floats when a non-integral base-2 logarithm appears.
"""
from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Optional, Union

from .kinematics import Direction, as_fraction

Ratio = Union[Fraction, float]
ONE_THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)


class Knowledge(enum.Enum):
    FULL = "full"
    NO_DISTANCE = "no-distance"
    NO_SPEED = "no-speed"
    NONE = "none"

    @classmethod
    def parse(cls, value) -> "Knowledge":
        if isinstance(value, Knowledge):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        aliases = {"full": "full", "fullknowledge": "full", "nodistance": "no-distance",
                   "nodist": "no-distance", "nospeed": "no-speed", "none": "none",
                   "noknowledge": "none"}
        if key not in aliases:
            raise ValueError(f"unknown knowledge model {value!r}")
        return cls(aliases[key])


def log2(q) -> Ratio:
    """Base-2 logarithm, exact when ``q`` is a power of two."""
    q = as_fraction(q)
    if q <= 0:
        raise ValueError("log2 of a non-positive number")
    n, m = q.numerator, q.denominator
    if n & (n - 1) == 0 and m & (m - 1) == 0:
        return Fraction(n.bit_length() - m.bit_length())
    return math.log2(n) - math.log2(m)


def full_away_bound(v) -> Fraction:
    v = as_fraction(v)
    return 1 + 2 / (1 - v)


def full_toward_bound(v) -> Fraction:
    v = as_fraction(v)
    return 1 + 2 / (1 + v) if v < 1 else 1 + 1 / v


def waiting_bound(v) -> Fraction:
    return 1 + 1 / as_fraction(v)


def no_dist_away_bound(v) -> Fraction:
    v = as_fraction(v)
    return 1 + 8 * (1 + v) / (1 - v) ** 2


def no_dist_toward_bound(v) -> Fraction:
    v = as_fraction(v)
    if v >= ONE_THIRD:
        return 1 + 1 / v
    return 1 + 8 * (1 - v) / (1 + v) ** 2


def no_dist_toward_zigzag_branch(v) -> Fraction:
    """The v < 1/3 formula evaluated at any v (for continuity checks)."""
    v = as_fraction(v)
    return 1 + 8 * (1 - v) / (1 + v) ** 2


def no_speed_away_bound(v) -> Ratio:
    v = as_fraction(v)
    if v <= HALF:
        return Fraction(5)
    lg = log2(1 / (1 - v))
    return 1 + 16 * lg ** 2 / (1 - v) ** 4 if isinstance(lg, Fraction) \
        else 1 + 16 * lg ** 2 / float(1 - v) ** 4


def no_knowledge_away_bound(v, d) -> Ratio:
    v, d = as_fraction(v), as_fraction(d)
    m = max(d, 1 / (1 - v))
    lg = log2(m)
    if lg == 0:
        return Fraction(1)
    llg = log2(lg) if isinstance(lg, Fraction) else math.log2(lg)
    if isinstance(lg, Fraction) and isinstance(llg, Fraction):
        return 1 + Fraction(16) / d * (llg + 3) * m ** 8 * lg ** 2
    return 1 + 16 / float(d) * (float(llg) + 3) * float(m) ** 8 * float(lg) ** 2


def zigzag_limit_cr(a, v, direction) -> Ratio:
    """Large-round limit of the just-missed ratio of the zig-zag search.

    Away: ``1 + 2a^2 / ((a-1) - v(a+1))``; Toward: ``1 + 2a^2 / ((a-1) + v(a+1))``.
    Returns ``inf`` when the denominator is not positive.
    """
    a, v = as_fraction(a), as_fraction(v)
    direction = Direction.parse(direction)
    if a <= 1:
        if direction is Direction.TOWARD and v > 0:
            return 1 + 1 / v
        return math.inf
    sign = -1 if direction is Direction.AWAY else 1
    den = (a - 1) + sign * v * (a + 1)
    if den <= 0:
        return math.inf
    return 1 + 2 * a * a / den


def analytic_cr_bound(model, direction, v, d=None) -> Ratio:
    """Competitive ratio printed for a knowledge model and movement direction."""
    knowledge = Knowledge.parse(model)
    direction = Direction.parse(direction)
    v = as_fraction(v)
    if v < 0:
        raise ValueError("v must be >= 0")
    if direction is Direction.AWAY:
        if v >= 1:
            raise ValueError(f"away-moving targets need v < 1, got {v}")
        if knowledge is Knowledge.FULL:
            return full_away_bound(v)
        if knowledge is Knowledge.NO_DISTANCE:
            return no_dist_away_bound(v)
        if knowledge is Knowledge.NO_SPEED:
            return no_speed_away_bound(v)
        if d is None:
            raise ValueError("the no-knowledge/away bound depends on d")
        return no_knowledge_away_bound(v, d)
    if v == 0:
        raise ValueError("toward-moving targets need v > 0")
    if knowledge is Knowledge.FULL:
        return full_toward_bound(v)
    if knowledge is Knowledge.NO_DISTANCE:
        return no_dist_toward_bound(v)
    if knowledge is Knowledge.NO_SPEED:
        return Fraction(3)
    return waiting_bound(v)


def no_speed_lemma_bound(f, k: int) -> Fraction:
    """``1 + 2^(1 + f_0 + ... + f_k) * 4^(k+1)``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return 1 + Fraction(2) ** (1 + sum(f(j) for j in range(k + 1))) * 4 ** (k + 1)


def no_knowledge_lemma_bound(f, g, i: int, d) -> Fraction:
    """``1 + 2(i+2)/d * 2^g_{i+1} * 2^(f_0 + ... + f_i) * 4^(i+1)`` for a catch in round i+1."""
    if i < 0:
        raise ValueError("i must be >= 0")
    d = as_fraction(d)
    return 1 + Fraction(2 * (i + 2)) / d * Fraction(2) ** g(i + 1) \
        * Fraction(2) ** sum(f(j) for j in range(i + 1)) * 4 ** (i + 1)


def first_sufficient_round(f, v, max_rounds: int = 64) -> Optional[int]:
    """Smallest k with ``1 - 2^-f_k >= v``."""
    v = as_fraction(v)
    for k in range(max_rounds):
        try:
            if 1 - Fraction(1, 2 ** f(k)) >= v:
                return k
        except IndexError:
            return None
    return None
