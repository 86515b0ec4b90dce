"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (printed in the terminal summary and
immediately on stdout) before asserting.
"""

import random
import time
from fractions import Fraction

from conftest import ACCEPTANCE_LINES
from oracles import HALF, R2, SILVER_ENDPOINTS, random_quadruple, random_two_cycle
from windtree.billiard import TableParams, compare_with_cocycle, trace
from windtree.cocycle import (
    bounding_box,
    boxes,
    check_local_patterns,
    check_self_avoiding,
    endpoint_recurrence,
    endpoints_from_words,
    growth_sequence,
    prefix_positions,
    shape_violations,
)
from windtree.errors import DegenerateError
from windtree.renorm import (
    TRUNCATED,
    LengthQuadruple,
    check_admissible,
    convergents,
    f_step,
    is_two_cycle,
    random_admissible,
    realize_sequence,
)
from windtree.veech import (
    MultiTwist,
    SlopeExpansion,
    check_multitwist_identities,
    cotangent_from_expansion,
    enclosure_at_depth,
    length_quadruple,
    multitwist_from_ab,
    multitwist_grid,
    params_from_multitwist,
    psi_expansion,
    slope_from_expansion,
)
from windtree.words import WORD_NAMES, expand_levels, periodic

SILVER = periodic((1, 2), 64)


def report(number, title, ok, detail):
    line = "[%s] criterion %d: %s (%s)" % ("PASS" if ok else "FAIL", number, title, detail)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_silver_convergents():
    t0 = time.perf_counter()
    vp = params_from_multitwist(MultiTwist(1, 2, 1, 2))
    se = SlopeExpansion.periodic([1], (vp.s_h, vp.s_v))
    slope = slope_from_expansion(se)
    z = LengthQuadruple.of(*length_quadruple(vp.a, vp.b, slope))
    seq = convergents(z, 64)
    elapsed = time.perf_counter() - t0
    ok = (
        (vp.a, vp.b, vp.s_h, vp.s_v) == (HALF, HALF, 2, 2)
        and slope == R2 - 1
        and seq.entries == ((1, 2),) * 64
        and seq.status == TRUNCATED
        and elapsed < 1.0
    )
    report(1, "(1,2) x 64 convergents in exact arithmetic", ok, "%d entries, %.3f s" % (len(seq.entries), elapsed))


def test_criterion_2_two_cycle_identity():
    rng = random.Random(20240601)
    cycles = 0
    for _ in range(1000):
        z = random_two_cycle(rng)
        z1, m1, n1 = f_step(z)
        z2, m2, n2 = f_step(z1)
        cycles += is_two_cycle(z) and z2 == z and z2.proportional(z) and (m1, n1, m2, n2) == (0,) * 4
    escapes = degenerate = violating = 0
    while violating < 1000:
        z = random_quadruple(rng)
        if is_two_cycle(z):
            continue
        violating += 1
        try:
            z1, m1, n1 = f_step(z)
            z2, m2, n2 = f_step(z1)
        except DegenerateError:
            degenerate += 1
            continue
        escapes += (not z2.proportional(z)) or (m1, n1, m2, n2) != (0,) * 4
    ok = cycles == 1000 and escapes + degenerate == 1000
    report(
        2,
        "F^2 = Z exactly on the two-cycle condition, escape otherwise",
        ok,
        "%d/1000 two-cycles, %d/1000 escapes (%d saddle connections)" % (cycles, escapes + degenerate, degenerate),
    )


def test_criterion_3_endpoint_and_box_oracles():
    t0 = time.perf_counter()
    systems = expand_levels(SILVER, 12)
    states = endpoint_recurrence(SILVER, 12)
    failures = []
    for ws, state in zip(systems, states):
        if endpoints_from_words(ws) != (state.X, state.Y):
            failures.append("endpoints at %d" % ws.level)
        if shape_violations(ws):
            failures.append("shape at %d" % ws.level)
        bx = boxes(state)
        for name, w in zip(WORD_NAMES, ws.words):
            box = bx[name]
            if (box.xmin, box.ymin) != (0, 0) or not box.contains(bounding_box(prefix_positions(w))):
                failures.append("box %s at %d" % (name, ws.level))
    frozen = [(s.X, s.Y, s.x4, s.y4) for s in states[: len(SILVER_ENDPOINTS)]] == SILVER_ENDPOINTS
    elapsed = time.perf_counter() - t0
    ok = not failures and frozen and elapsed < 30
    report(3, "endpoint/box oracles for k <= 12", ok, "%d failures, %.2f s" % (len(failures), elapsed))


def test_criterion_4_self_avoidance():
    systems = expand_levels(SILVER, 10)
    avoid = {k: check_self_avoiding(systems[k - 1], *SILVER[k - 1]).ok for k in range(4, 11)}
    patterns = [check_local_patterns(w).ok for w in systems[8].words]
    ok = all(avoid.values()) and all(patterns) and len(patterns) == 6
    report(
        4,
        "self-avoidance at levels 4-10 and local patterns at level 8",
        ok,
        "levels ok: %s; patterns ok: %d/6" % (sorted(k for k, v in avoid.items() if v), sum(patterns)),
    )


def test_criterion_5_billiard_cocycle_bound():
    t0 = time.perf_counter()
    tp = TableParams(HALF, HALF)
    slope = R2 - 1
    starts = [(Fraction(26 + 5 * i, 100) + Fraction(1, 997), Fraction(73 - 4 * i, 100) - Fraction(1, 991)) for i in range(10)]
    crossings = 0
    worst = Fraction(0)
    slack = Fraction(0)
    ok = True
    for start in starts:
        assert tp.locate(start)[0] == "junction"
        traj = trace(tp, start, slope, 10_000)
        ok &= traj.terminated is None
        rep = compare_with_cocycle(traj, convergents=SILVER)
        ok &= rep.bound_ok and rep.language_checked
        crossings += rep.checked
        worst = max(worst, rep.max_deviation_upper)
        slack = max(slack, rep.enclosure_slack)
    elapsed = time.perf_counter() - t0
    ok = ok and crossings >= 10_000 and slack <= Fraction(1, 10**9) and elapsed < 60
    report(
        5,
        "billiard vs cocycle within sqrt(2)",
        ok,
        "%d crossings from %d starts, max deviation %.6f, slack %.1e, %.1f s"
        % (crossings, len(starts), float(worst), float(slack), elapsed),
    )


def test_criterion_6_veech_grid():
    grid = multitwist_grid(12)
    bad = []
    for mt in grid:
        vp = params_from_multitwist(mt)
        prod = (1 - vp.a) * (1 - vp.b)
        exact = mt.m_h * vp.b == mt.n_h * prod and mt.m_v * vp.a == mt.n_v * prod
        if not (exact and check_multitwist_identities(vp.a, vp.b, mt) and multitwist_from_ab(vp.a, vp.b) == mt):
            bad.append(mt)
    report(6, "Veech formulas on the m,n <= 12 grid", not bad, "%d multi-twists, %d failures" % (len(grid), len(bad)))


def test_criterion_7_slope_machinery():
    se = SlopeExpansion.periodic([1], (2, 2))
    exact = cotangent_from_expansion(se, exact=True)
    lo, hi = enclosure_at_depth(se, 20)
    coeffs = psi_expansion(exact, 2, 2, 32)
    ok = exact == 1 + R2 and lo <= exact <= hi and hi - lo < Fraction(1, 10**12) and coeffs == [1] * 32
    report(7, "exact 1+sqrt(2), k=20 enclosure, psi to depth 32", ok, "width %.2e" % float(hi - lo))


def test_criterion_8_growth_surrogate_and_bouncing_control():
    growth = growth_sequence(endpoint_recurrence(SILVER, 12))
    tail = growth[3:13]
    two_step = all(growth[k + 2] > growth[k] for k in range(3, 11))
    monotone = all(b >= a for a, b in zip(tail, tail[1:]))
    tp = TableParams(HALF, HALF)
    bounce = trace(tp, (HALF, Fraction(1, 10)), 0, 10_000)
    bounded = len(bounce.events) == 10_000 and bounce.max_displacement() <= 0.25 + 1e-12
    ok = two_step and monotone and bounded
    report(
        8,
        "box growth on levels 3-12 and bounded slope-0 bouncing",
        ok,
        "growth %s; bouncing max displacement %.3f" % (tail, bounce.max_displacement()),
    )


def test_criterion_9_admissibility_round_trip():
    rng = random.Random(7)
    failures = zero_m = 0
    for _ in range(100):
        seq = random_admissible(rng, rng.randint(1, 12))
        zero_m += any(m == 0 for m, _ in seq)
        if not check_admissible(seq):
            failures += 1
            continue
        if list(convergents(realize_sequence(seq), len(seq)).entries) != seq:
            failures += 1
    ok = failures == 0 and zero_m > 0
    report(9, "admissible prefixes round-trip", ok, "100 prefixes, %d with m_k = 0, %d failures" % (zero_m, failures))
