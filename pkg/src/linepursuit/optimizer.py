"""Expansion-ratio and exponent-sequence optimization.

The analytic objective is evaluated in exact rational arithmetic at rational
probe points, so golden-section comparisons stay meaningful well below the
float resolution of the objective's value near its minimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .bounds import (
    Ratio,
    analytic_cr_bound,
    first_sufficient_round,
    no_knowledge_lemma_bound,
    no_speed_lemma_bound,
)
from .evaluation import sup_cr_over_d
from .kinematics import DEFAULT_ROUND_CAP, Direction, as_fraction
from .strategies import ExponentSeq, NoSpeedAway, Zigzag

INV_PHI = (math.sqrt(5) - 1) / 2
ONE_THIRD = Fraction(1, 3)


class OptimizationError(RuntimeError):
    """Bracketing failed (objective not unimodal on the scan, or bad range)."""


@dataclass(frozen=True)
class ScalarOptResult:
    argmin: Fraction
    value: Ratio
    iterations: int
    bracket: tuple

    def __post_init__(self):
        lo, hi = self.bracket
        if not lo <= self.argmin <= hi:
            raise ValueError("argmin outside its bracket")


def toward_bound(a, v) -> Fraction:
    """``1 + 2a^2 / ((a-1) + v(a+1))``, the zig-zag bound against a toward target."""
    a, v = as_fraction(a), as_fraction(v)
    if a <= 1:
        raise ValueError(f"toward_bound needs a > 1, got {a}")
    if v < 0:
        raise ValueError(f"v must be >= 0, got {v}")
    return 1 + 2 * a * a / ((a - 1) + v * (a + 1))


def toward_bound_derivative(a, v) -> Fraction:
    """d/da of :func:`toward_bound`, exact."""
    a, v = as_fraction(a), as_fraction(v)
    den = (a - 1) + v * (a + 1)
    return (4 * a * den - 2 * a * a * (1 + v)) / den ** 2


def closed_form_toward_a(v) -> Fraction:
    v = as_fraction(v)
    return 2 * (1 - v) / (1 + v)


def golden_section(objective: Callable[[Fraction], Ratio], lo, hi, tol,
                   max_iter: int = 500) -> ScalarOptResult:
    """Golden-section search on ``[lo, hi]`` until the bracket is narrower than ``tol``.

    Probe points are rationals (floats converted exactly), so an exact objective
    is compared exactly.
    """
    lo, hi = as_fraction(lo), as_fraction(hi)
    if hi <= lo:
        raise OptimizationError(f"empty bracket [{lo}, {hi}]")
    tol = as_fraction(tol)

    def probe(x0, x1, frac):
        return Fraction(float(x0 + (x1 - x0) * Fraction(frac)))

    c, d = probe(lo, hi, 1 - INV_PHI), probe(lo, hi, INV_PHI)
    fc, fd = objective(c), objective(d)
    it = 0
    while hi - lo > tol:
        if it >= max_iter:
            raise OptimizationError(f"no convergence after {max_iter} iterations")
        it += 1
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = probe(lo, hi, 1 - INV_PHI)
            fc = objective(c)
        else:
            lo, c, fc = c, d, fd
            d = probe(lo, hi, INV_PHI)
            fd = objective(d)
        # float rounding of probes can make them collide near convergence
        if not lo <= c <= d <= hi or c == d:
            break
    best, fbest = (c, fc) if fc <= fd else (d, fd)
    return ScalarOptResult(best, fbest, it, (lo, hi))


def minimize_toward_bound(v, tol=Fraction(1, 10 ** 10)) -> ScalarOptResult:
    """Minimize :func:`toward_bound` over ``a`` in ``(1, 3]``.

    Also checks that the exact derivative vanishes at ``2(1-v)/(1+v)``.
    """
    v = as_fraction(v)
    if not 0 < v < ONE_THIRD:
        raise ValueError(f"the zig-zag toward bound is optimized for 0 < v < 1/3, got {v}")
    a_star = closed_form_toward_a(v)
    if toward_bound_derivative(a_star, v) != 0:
        raise OptimizationError(f"derivative does not vanish at the closed-form ratio {a_star}")
    lo = 1 + Fraction(1, 10 ** 12)
    return golden_section(lambda a: toward_bound(a, v), lo, 3, tol)


def _empirical_objective(direction: Direction, v: Fraction, d_family, round_cap: int):
    d_lo, d_hi = (as_fraction(x) for x in d_family)

    def objective(a: Fraction) -> Fraction:
        ev = sup_cr_over_d(Zigzag(a), v, (d_lo, d_hi), direction, round_cap)
        if ev.violations or ev.unresolved:
            return Fraction(10 ** 12)
        return ev.empirical_sup

    return objective


def _is_unimodal(values: Sequence[float], rtol: float = 1e-9) -> bool:
    i = min(range(len(values)), key=values.__getitem__)
    left = values[:i + 1]
    right = values[i:]
    dec = all(left[k] >= left[k + 1] * (1 - rtol) for k in range(len(left) - 1))
    inc = all(right[k] <= right[k + 1] * (1 + rtol) for k in range(len(right) - 1))
    return dec and inc


def default_a_range(direction, v) -> tuple:
    direction, v = Direction.parse(direction), as_fraction(v)
    if direction is Direction.AWAY:
        # feasibility needs (a-1) > v(a+1), i.e. a > (1+v)/(1-v)
        lo = (1 + v) / (1 - v)
        return lo + (lo / 20), 4 * lo + 2
    return Fraction(21, 20), Fraction(3)


def empirical_best_a(direction, v, a_range=None, d_family=None, round_cap: int = 512,
                     scan_points: int = 100, tol=Fraction(1, 1000)) -> ScalarOptResult:
    """Minimize the exact worst case of ``Zigzag(a)`` over ``a``.

    A coarse scan of ``scan_points`` ratios must look unimodal; the refinement
    is golden-section on the two scan cells around the scan minimum.
    """
    direction, v = Direction.parse(direction), as_fraction(v)
    if direction is Direction.AWAY and not 0 <= v < 1:
        raise ValueError(f"away targets need 0 <= v < 1, got {v}")
    if direction is Direction.TOWARD and not 0 < v < ONE_THIRD:
        raise ValueError(f"toward zig-zag optimization needs 0 < v < 1/3, got {v}")
    lo, hi = (as_fraction(x) for x in (a_range or default_a_range(direction, v)))
    # distances up to 10^6 span enough rounds for the just-missed ratio to settle
    objective = _empirical_objective(direction, v, d_family or (1, 10 ** 6), round_cap)
    grid = [lo + (hi - lo) * Fraction(k, scan_points - 1) for k in range(scan_points)]
    values = [objective(a) for a in grid]
    floats = [float(x) for x in values]
    if not _is_unimodal(floats):
        raise OptimizationError("empirical objective is not unimodal on the scan; narrow a_range")
    k = min(range(len(values)), key=values.__getitem__)
    b_lo, b_hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    res = golden_section(objective, b_lo, b_hi, tol)
    if values[k] < res.value:
        res = ScalarOptResult(grid[k], values[k], res.iterations, res.bracket)
    return res


def sequence_bound_no_speed(f: ExponentSeq, k: int) -> Fraction:
    return no_speed_lemma_bound(f, k)


def sequence_bound_no_knowledge(f: ExponentSeq, g: ExponentSeq, i: int, d) -> Fraction:
    return no_knowledge_lemma_bound(f, g, i, d)


@dataclass(frozen=True)
class SequenceRow:
    sequence: str
    v: Fraction
    empirical_sup: Ratio
    first_sufficient_round: Optional[int]
    lemma_bound: Optional[Fraction]
    theorem_bound: Optional[Ratio]
    within_theorem: Optional[bool]


def sequence_study(candidates: Iterable[ExponentSeq], v_grid, d_grid=(1, 10),
                   round_cap: int = DEFAULT_ROUND_CAP) -> list[SequenceRow]:
    """Compare speed-exponent sequences on the no-speed/away model.

    Rows are ranked by (v, empirical sup). The theorem bound only applies to
    ``f_j = 2^j``; other sequences report it as ``None``.
    """
    rows = []
    d_lo, d_hi = (as_fraction(x) for x in (min(d_grid), max(d_grid)))
    for seq in candidates:
        seq.validate(1)
        for v in (as_fraction(x) for x in v_grid):
            ev = sup_cr_over_d(NoSpeedAway(f=seq), v, (d_lo, d_hi), Direction.AWAY, round_cap)
            k = first_sufficient_round(seq, v)
            lemma = no_speed_lemma_bound(seq, k) if k is not None else None
            theorem = analytic_cr_bound("no-speed", "away", v) if seq.name == "pow2" else None
            ok = None if theorem is None else float(ev.empirical_sup) <= float(theorem)
            rows.append(SequenceRow(seq.name, v, ev.empirical_sup, k, lemma, theorem, ok))
    rows.sort(key=lambda r: (r.v, float(r.empirical_sup), r.sequence))
    return rows


OPT_REPORT_COLUMNS = ("objective", "v", "argmin_a", "min_value", "closed_form_a", "closed_form_value", "abs_err")


def optimization_record(objective: str, v, result: ScalarOptResult, closed_a, closed_value) -> dict:
    return {
        "objective": objective,
        "v": str(as_fraction(v)),
        "argmin_a": f"{float(result.argmin):.12g}",
        "min_value": f"{float(result.value):.12g}",
        "closed_form_a": f"{float(closed_a):.12g}",
        "closed_form_value": f"{float(closed_value):.12g}",
        "abs_err": f"{abs(float(result.argmin) - float(closed_a)):.3g}",
    }
