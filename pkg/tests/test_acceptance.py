"""Acceptance suite: twelve end-to-end criteria at their stated tolerances.

Each ``criterion_N`` returns ``(passed, detail)``. Under pytest every criterion
is one test and a PASS/FAIL line per criterion is printed in the terminal
summary (see ``conftest.py``); ``python tests/test_acceptance.py`` prints the
same lines directly.

Expected values come from closed forms evaluated here with exact rationals,
or from the independent helpers in ``oracle.py``.
"""
from __future__ import annotations

import math
import random
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from oracle import random_rational, random_walk, stepper_catch_time, zigzag_just_missed_cr  # noqa: E402

from linepursuit.adversary import cone_audit, departure_witness, eps_speed_witness  # noqa: E402
from linepursuit.evaluation import sup_cr_over_d  # noqa: E402
from linepursuit.kinematics import (  # noqa: E402
    Direction,
    Instance,
    NoCatch,
    Ray,
    Side,
    Trajectory,
    first_catch,
    instance_cr,
    optimal_offline_time,
    target_position,
)
from linepursuit.optimizer import closed_form_toward_a, empirical_best_a, minimize_toward_bound  # noqa: E402
from linepursuit.strategies import (  # noqa: E402
    ExponentSeq,
    FullAway,
    FullToward,
    NoDistToward,
    NoSpeedAway,
    NoSpeedToward,
    Zigzag,
    make_full_away,
    make_full_toward,
    make_no_dist_toward,
    make_no_knowledge_away,
    make_no_speed_away,
    make_no_speed_toward,
    make_waiting,
    make_zigzag,
)

AWAY, TOWARD = Direction.AWAY, Direction.TOWARD
SIDES = (Side.LEFT, Side.RIGHT)
RESULTS: dict = {}


# closed forms, written out here rather than imported from the package
def full_away_cr(v):
    return 1 + 2 / (1 - v)


def full_toward_cr(v):
    return 1 + F(2) / (1 + v)


def waiting_cr(v):
    return 1 + 1 / F(v)


def no_dist_away_cr(v):
    return 1 + 8 * (1 + v) / (1 - v) ** 2


def no_dist_toward_cr(v):
    return 1 + 8 * (1 - v) / (1 + v) ** 2


def no_speed_theorem(v):
    lg = math.log2(1 / (1 - float(v)))
    return 1 + 16 * lg ** 2 / (1 - float(v)) ** 4


def no_speed_lemma(f, k):
    return 1 + F(2) ** (1 + sum(f(j) for j in range(k + 1))) * 4 ** (k + 1)


def no_knowledge_lemma(f, g, i, d):
    return 1 + F(2 * (i + 2)) / d * F(2) ** g(i + 1) * F(2) ** sum(f(j) for j in range(i + 1)) * 4 ** (i + 1)


def no_knowledge_theorem(v, d):
    m = max(float(d), 1 / (1 - float(v)))
    lg = math.log2(m)
    return 1 + 16 / float(d) * (math.log2(lg) + 3) * m ** 8 * lg ** 2


def _fail_detail(bad, limit=3):
    return "; ".join(str(b) for b in bad[:limit])


# -- criteria ------------------------------------------------------------------------

def criterion_1():
    bad = []
    for v in (F(1, 10), F(1, 4), F(1, 2), F(3, 4), F(9, 10)):
        for d in (1, 2, 5, 10):
            ev = sup_cr_over_d(FullAway(), v, (d, d), AWAY)
            if ev.empirical_sup != full_away_cr(v):
                bad.append((v, d, ev.empirical_sup))
    return not bad, "20 (v, d) cells exact" if not bad else _fail_detail(bad)


def criterion_2():
    bad = []
    for v in (F(1, 10), F(1, 4), F(1, 2), F(3, 4), F(9, 10)):
        for d in (1, 2, 5, 10):
            ev = sup_cr_over_d(FullToward(), v, (d, d), TOWARD)
            if ev.empirical_sup != full_toward_cr(v):
                bad.append(("full", v, d, ev.empirical_sup))
    for v in (1, 2, 5):
        for d in (1, 2, 5, 10):
            crs = {instance_cr(make_waiting(), Instance(d, v, s, TOWARD)) for s in SIDES}
            if crs != {waiting_cr(v)}:
                bad.append(("waiting", v, d, crs))
    return not bad, "20 full-knowledge cells and 12 waiting cells exact" if not bad else _fail_detail(bad)


def criterion_3():
    bad, notes = [], []
    for v in (F(0), F(1, 10), F(1, 4), F(1, 3), F(1, 2)):
        a = 2 * (1 + v) / (1 - v)
        bound = no_dist_away_cr(v)
        series = [zigzag_just_missed_cr(a, v, k, toward=False) for k in range(26)]
        crs = [cr for cr, _ in series]
        if any(x > y for x, y in zip(crs, crs[1:])):
            bad.append((v, "just-missed ratios not nondecreasing in k"))
        top = max(crs)
        if not (float(top) <= float(bound) + 1e-9 and float(top) >= 0.99 * float(bound)):
            bad.append((v, "k<=25 sup", float(top), float(bound)))
        # the exact engine's sup over every d up to the k = 25 family agrees with the oracle
        d25 = series[25][1]
        d26 = zigzag_just_missed_cr(a, v, 26, toward=False)[1]
        ev = sup_cr_over_d(Zigzag(a), v, (1, (d25 + d26) / 2), AWAY, 128)
        if ev.violations or ev.unresolved or ev.empirical_sup != top:
            bad.append((v, "engine sup", ev.empirical_sup, top))
        notes.append(f"v={v}: {float(top):.9f}/{float(bound):.6g}")
    return not bad, "; ".join(notes) if not bad else _fail_detail(bad)


def criterion_4():
    bad, notes = [], []
    for v in (F(1, 20), F(1, 10), F(1, 5), F(3, 10)):
        bound = no_dist_toward_cr(v)
        ev = sup_cr_over_d(NoDistToward(), v, (1, 1000), TOWARD, 512)
        sup = float(ev.empirical_sup)
        if ev.violations or ev.unresolved or not (sup <= float(bound) + 1e-9 and sup >= 0.98 * float(bound)):
            bad.append((v, sup, float(bound)))
        notes.append(f"v={v}: {sup:.6f}/{float(bound):.6f}")
    for v in (F(1, 3), F(1, 2), F(1)):
        ev = sup_cr_over_d(NoDistToward(), v, (1, 1000), TOWARD)
        if ev.empirical_sup != waiting_cr(v):
            bad.append((v, ev.empirical_sup))
    if not (no_dist_toward_cr(F(1, 3)) == waiting_cr(F(1, 3)) == 4):
        bad.append(("continuity", no_dist_toward_cr(F(1, 3)), waiting_cr(F(1, 3))))
    return not bad, "; ".join(notes) + "; waiting branch exact; both branches 4 at v=1/3" if not bad \
        else _fail_detail(bad)


def criterion_5():
    v, d_max = F(1, 2), 10 ** 4
    bad, notes = [], []
    # a = 1 needs about d rounds; a = 1/2 accumulates at t = 4 and needs few
    for a, cap in ((F(1, 2), 64), (F(1), 30000)):
        traj = make_zigzag(a)
        ev = sup_cr_over_d(Zigzag(a), v, (1, d_max), TOWARD, cap)
        top = float(ev.empirical_sup)
        if ev.violations or top > 3 + 1e-9:
            bad.append((a, "sup", top, ev.violations))
        # Distances whose target reaches the origin exactly as the turns accumulate
        # there are only caught in the limit. The robot is at 0 from the accumulation
        # time T on, so it meets such a target by max(T, arrival at the origin).
        for side, lo, hi in ev.unresolved:
            if traj.zeno is None:
                bad.append((a, "unresolved window without accumulation", lo, hi))
                continue
            T = traj.zeno.time
            worst = max(T / (lo / v), 1) * (lo / v) / optimal_offline_time(Instance(lo, v, side, TOWARD))
            if float(worst) > 3 + 1e-9:
                bad.append((a, "unresolved window bound", float(worst)))
        far = max(instance_cr(traj, Instance(d_max, v, s, TOWARD), cap) for s in SIDES)
        if float(far) < 3 - 1e-2:
            bad.append((a, "largest d", float(far)))
        notes.append(f"a={a}: sup {top:.9f}, at d=1e4 {float(far):.6f}, {len(ev.unresolved)} limit windows")
    return not bad, "; ".join(notes) if not bad else "; ".join(notes) + " | " + _fail_detail(bad)


def criterion_6():
    f = ExponentSeq.pow2()
    bad, notes = [], []
    for v in (F(1, 10), F(1, 4), F(1, 2)):
        ev = sup_cr_over_d(NoSpeedAway(), v, (1, 10), AWAY)
        if ev.empirical_sup != 5:
            bad.append((v, ev.empirical_sup))
    for v in (F(3, 5), F(3, 4), F(9, 10)):
        ev = sup_cr_over_d(NoSpeedAway(), v, (1, 10), AWAY)
        if ev.violations or ev.unresolved or float(ev.empirical_sup) > no_speed_theorem(v):
            bad.append((v, "theorem", float(ev.empirical_sup), no_speed_theorem(v)))
        for ps in ev.pieces:
            if ps.value > no_speed_lemma(f, ps.piece.round):
                bad.append((v, "lemma", ps.piece.round, ps.value))
        notes.append(f"v={v}: {float(ev.empirical_sup):.6g} <= {no_speed_theorem(v):.6g}")
    return not bad, "sup 5 exact for v<=1/2; " + "; ".join(notes) if not bad else _fail_detail(bad)


def criterion_7():
    bad, notes = [], []
    for eps in (F(1, 100), F(1, 1000), F(1, 10000)):
        v = eps / 3
        ev = sup_cr_over_d(NoSpeedToward(), v, (1, 10), TOWARD)
        w = eps_speed_witness(make_no_speed_toward(1), 1, eps)
        for label, x in (("sup", ev.empirical_sup), ("witness", w.realized_cr)):
            if not 3 - 3 * eps <= x <= 3:
                bad.append((eps, label, x))
        notes.append(f"eps={eps}: sup {ev.empirical_sup}, witness {w.realized_cr}")
    return not bad, "; ".join(notes) if not bad else _fail_detail(bad)


def criterion_8():
    f, g = ExponentSeq.pow2(), ExponentSeq.pow2(seed=0)
    traj = make_no_knowledge_away()
    bad, worst = [], 0.0
    for d in (1, 2, 8):
        for v in (F(1, 4), F(1, 2), F(3, 4)):
            for side in SIDES:
                inst = Instance(d, v, side, AWAY)
                res = first_catch(traj, inst)
                if isinstance(res, NoCatch):
                    bad.append((d, v, side, "no catch"))
                    continue
                cr = res.time / optimal_offline_time(inst)
                lemma = no_knowledge_lemma(f, g, max(res.round - 1, 0), d)
                theorem = no_knowledge_theorem(v, d)
                if cr > lemma or float(cr) > theorem:
                    bad.append((d, v, side.letter, float(cr), float(lemma), theorem))
                worst = max(worst, float(cr) / theorem)
    return not bad, f"18 instances; worst CR/theorem {worst:.3g}" if not bad else _fail_detail(bad)


def criterion_9():
    d = 10 ** 4
    library = {
        "zigzag(1/2)": make_zigzag(F(1, 2)),
        "zigzag(1)": make_zigzag(1),
        "zigzag(4/3)": make_zigzag(F(4, 3)),
        "zigzag(2)": make_zigzag(2),
        "zigzag(3,L)": make_zigzag(3, Side.LEFT),
        "no-distance-toward(1/5)": make_no_dist_toward(F(1, 5)),
        "full-toward(1/2,d)": make_full_toward(F(1, 2), d),
        "full-away(1/2,d)": make_full_away(F(1, 2), d),
        "no-speed-toward(d)": make_no_speed_toward(d),
        "no-speed-away(d)": make_no_speed_away(d),
        "no-knowledge-away": make_no_knowledge_away(),
    }
    bad, worst = [], math.inf
    for name, traj in library.items():
        w = departure_witness(traj, d, round_cap=4096)
        target = 1 + 1 / w.instance.v
        if float(w.realized_cr) < float(target) - 1e-2:
            bad.append((name, float(w.realized_cr), float(target)))
        worst = min(worst, float(w.realized_cr) - float(target))
    for v in (F(1, 10), F(1, 2), F(1), F(3)):
        crs = {instance_cr(make_waiting(), Instance(d, v, s, TOWARD)) for s in SIDES}
        if crs != {waiting_cr(v)}:
            bad.append(("waiting", v, crs))
    return not bad, f"{len(library)} strategies, min realized - (1+1/v) = {worst:.3g}; waiting exact" \
        if not bad else _fail_detail(bad)


def criterion_10():
    rng = random.Random(20240610)
    worst = 0.0
    for _ in range(20):
        v = F(rng.randint(1, 9999), 30000)     # uniform rationals in (0, 1/3)
        res = minimize_toward_bound(v)
        worst = max(worst, abs(float(res.argmin - closed_form_toward_a(v))))
    emp = empirical_best_a(AWAY, 0)
    ok = worst <= 1e-8 and abs(float(emp.argmin) - 2) <= 1e-2 and abs(float(emp.value) - 9) <= 1e-2
    return ok, f"max |a - closed form| = {worst:.2e}; away v=0: a={float(emp.argmin):.5f}, CR={float(emp.value):.5f}"


def criterion_11():
    rng = random.Random(11)
    worst, missing = 0.0, []
    for n in range(500):
        times, xs = random_walk(rng)
        inst = Instance(random_rational(rng, 1, 2), random_rational(rng, F(1, 50), F(1, 2)),
                        rng.choice(SIDES), rng.choice((TOWARD, AWAY)))
        # after the random turns the robot heads for the target at full speed
        vel = F(1) if target_position(inst, times[-1]) > xs[-1] else F(-1)
        traj = Trajectory([(t, x, i) for i, (t, x) in enumerate(zip(times[1:], xs[1:]))],
                          Ray(times[-1], xs[-1], vel))
        res = first_catch(traj, inst)
        ref = stepper_catch_time(times, xs, float(vel), float(inst.p), float(inst.velocity))
        if isinstance(res, NoCatch) or ref is None:
            missing.append((n, res, ref))
            continue
        worst = max(worst, abs(ref - float(res.time)))
    ok = not missing and worst <= 1e-5
    return ok, f"500 instances, max |exact - stepper| = {worst:.2e}" if ok else f"{missing[:2]} worst {worst}"


def criterion_12():
    bad, notes = [], []
    for v in (F(1, 10), F(1, 5)):
        bound = no_dist_toward_cr(v)
        w = cone_audit(make_no_dist_toward(v), v, 10 ** 12)
        realized = float(w.realized_cr)
        if realized < float(bound) * (1 - 1e-2):
            bad.append((v, realized, float(bound)))
        notes.append(f"v={v}: realized {realized:.9f} vs bound {float(bound):.9f}")
    return not bad, "; ".join(notes) if not bad else _fail_detail(bad)


CRITERIA = [globals()[f"criterion_{k}"] for k in range(1, 13)]


@pytest.mark.parametrize("k", range(1, 13), ids=[f"criterion_{k}" for k in range(1, 13)])
def test_criterion(k):
    ok, detail = CRITERIA[k - 1]()
    RESULTS[k] = (ok, detail)
    print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for k, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        failed += not ok
        print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    sys.exit(1 if failed else 0)
