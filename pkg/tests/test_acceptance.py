"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script
(``python tests/test_acceptance.py``) for just the summary lines.
"""

from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction

import pytest

from mixedcongestion import gadgets
from mixedcongestion.dynamics import latency_ranks, rank_potential, run_dynamics
from mixedcongestion.equilibrium import (
    approx_solve, approx_threshold, beta_sweep, enumerate_pne, has_pne, improves_beyond,
    potential, solve_monotone_dependence, solve_pure_preferences, solve_singleton,
)
from mixedcongestion.game import all_costs, deviation_cost, player_cost
from mixedcongestion.generators import (
    random_explicit_game, random_matroid, random_matroid_game, random_singleton_game,
)
from mixedcongestion.matroid import lemma1_verify

LINES: list[str] = []


def _report(number: int, title: str, ok: bool, elapsed: float, limit: float, detail: str = ""):
    in_time = elapsed < limit
    verdict = "PASS" if ok and in_time else "FAIL"
    line = f"{verdict} criterion {number}: {title} [{elapsed:.2f}s / limit {limit:g}s]"
    if detail:
        line += f" {detail}"
    LINES.append(line)
    print(line, flush=True)
    return ok and in_time


@pytest.fixture
def report(capsys):
    def emit(*args, **kwargs):
        with capsys.disabled():
            print()
            return _report(*args, **kwargs)
    return emit


def _state(game, *strategies):
    return game.make_state([frozenset(s) for s in strategies])


# -- 1 ----------------------------------------------------------------------------------

def check_1():
    t = time.perf_counter()
    full = gadgets.build_thm2()
    no_pne = full.state_count() == 120 and enumerate_pne(full) == []
    g = gadgets.build_thm2_restricted()
    trace = run_dynamics(g, g.first_state())
    costs = [all_costs(g, s) for s in trace.states]
    expected = [(100, 45), (94, 90), (108, 88), (100, 84), (100, 45)]
    ok = no_pne and costs == expected and trace.verdict == "cycle"
    return ok, time.perf_counter() - t, f"costs={[tuple(map(int, c)) for c in costs]}"


def test_criterion_1_thm2(report):
    ok, elapsed, detail = check_1()
    assert report(1, "no-PNE matroid gadget and its 4-state cycle", ok, elapsed, 1, detail)


# -- 2 ----------------------------------------------------------------------------------

def check_2():
    t = time.perf_counter()
    a, b = gadgets.build_thm4a(), gadgets.build_thm4b()
    no_pne = enumerate_pne(a) == [] and enumerate_pne(b) == []
    s1, s2 = ["r1"], ["r2", "r3", "r4", "r5"]
    t1, t2 = ["r2", "r3", "r4"], ["r5", "r6"]
    trace = [all_costs(a, _state(a, x, y)) for x, y in [(s1, t1), (s2, t1), (s2, t2), (s1, t2)]]
    shared_r2 = all_costs(b, _state(b, ["r1", "r2", "r4"], ["r2", "r5"]))
    shared_r4 = all_costs(b, _state(b, ["r1", "r2", "r4"], ["r3", "r4"]))
    ok = (no_pne and trace == [(6, 6), (4, 12), (8, 11), (6, 7)]
          and shared_r2 == (56, 38) and shared_r4 == (55, 39))
    shown = [tuple(map(int, c)) for c in trace + [shared_r2, shared_r4]]
    return ok, time.perf_counter() - t, f"4a={shown[:4]} 4b={shown[4]},{shown[5]}"


def test_criterion_2_thm4(report):
    ok, elapsed, detail = check_2()
    assert report(2, "non-matroid no-PNE games", ok, elapsed, 1, detail)


# -- 3 ----------------------------------------------------------------------------------

def check_3():
    t = time.perf_counter()
    g = gadgets.build_thm5()
    trace = run_dynamics(g, _state(g, ["r1"], ["r1"], ["r2"]), scheduler="round_robin")
    costs = [all_costs(g, s) for s in trace.states[:-1]]
    movers = [s.player + 1 for s in trace.steps]
    pne = enumerate_pne(g)
    ok = (trace.verdict == "cycle" and trace.cycle_length == 6
          and movers == [1, 2, 3, 1, 2, 3]
          and costs == [(5, 5, 1), (4, 2, 4), (4, 1, 4), (3, 6, 3), (2, 6, 3), (5, 5, 2)]
          and pne == [_state(g, ["r1"], ["r3"], ["r2"]), _state(g, ["r2"], ["r1"], ["r3"])])
    return ok, time.perf_counter() - t, f"movers={movers} pne={[g.format_state(s) for s in pne]}"


def test_criterion_3_thm5(report):
    ok, elapsed, detail = check_3()
    assert report(3, "singleton best-response cycle and its two PNE", ok, elapsed, 1, detail)


# -- 4 ----------------------------------------------------------------------------------

GOLDEN_THM7_MIN_BETA = Fraction(3)


def check_4():
    t = time.perf_counter()
    g = gadgets.build_thm7()
    sweep = beta_sweep(g)
    ok = g.state_count() == 2**8 * 72 * 72 and sweep.min_beta == GOLDEN_THM7_MIN_BETA
    return ok, time.perf_counter() - t, f"states={g.state_count()} min={sweep.min_beta} max={sweep.max_beta}"


def test_criterion_4_thm7_sweep(report):
    ok, elapsed, detail = check_4()
    assert report(4, "min achieved factor over all ten-player states is 3", ok, elapsed, 300, detail)


# -- 5 ----------------------------------------------------------------------------------

def check_5():
    t = time.perf_counter()
    rng = random.Random(5)
    failures = 0
    for k in range(1000):
        kind = ("uniform", "partition", "graphic")[k % 3]
        ground = [f"g{j}" for j in range(rng.randint(1, 8))]
        m = random_matroid(rng, ground, kind)
        w = {e: Fraction(rng.randint(0, 30), rng.randint(1, 7)) for e in ground}
        failures += not lemma1_verify(m, w).holds
    return failures == 0, time.perf_counter() - t, f"instances=1000 failures={failures}"


def test_criterion_5_lemma1(report):
    ok, elapsed, detail = check_5()
    assert report(5, "min-sum bases also minimise the max weight", ok, elapsed, 30, detail)


# -- 6 ----------------------------------------------------------------------------------

def check_6():
    t = time.perf_counter()
    rng = random.Random(6)
    bad = []
    worst = Fraction(0)
    for k in range(500):
        n, m = rng.randint(1, 5), rng.randint(2, 8)
        g = random_matroid_game(rng, n, m, monotone=True)
        start = tuple(rng.choice(g.strategies(i)) for i in range(n))
        bound = n * n * m * m
        trace = run_dynamics(g, start, "lazy_best_response", max_steps=bound + 1)
        ranks = latency_ranks(g)
        phi = [rank_potential(g, s, ranks) for s in trace.states]
        if (trace.verdict != "converged" or len(trace.steps) > bound
                or any(a <= b for a, b in zip(phi, phi[1:]))):
            bad.append(k)
        worst = max(worst, Fraction(len(trace.steps), bound))
    return not bad, time.perf_counter() - t, f"games=500 failures={bad} max steps/bound={float(worst):.3f}"


def test_criterion_6_lazy_convergence(report):
    ok, elapsed, detail = check_6()
    assert report(6, "lazy best responses descend the rank potential", ok, elapsed, 60, detail)


# -- 7 ----------------------------------------------------------------------------------

def _case_game(rng, kind):
    n, m = rng.randint(1, 4), rng.randint(2, 6)
    same = kind in ("square", "sum")
    alphas = "uniform" if kind in ("mixed", "sum") else "any"
    if rng.random() < 0.5:
        return random_explicit_game(rng, n, m, alphas=alphas, same=same)
    return random_matroid_game(rng, n, m, alphas=alphas, same=same)


def check_7():
    t = time.perf_counter()
    rng = random.Random(7)
    stats = {}
    for kind in ("mixed", "square", "sum"):
        descents = violations = failed = 0
        for _ in range(500):
            g = _case_game(rng, kind)
            beta, squared = approx_threshold(g, kind)
            for _ in range(3):
                s = tuple(rng.choice(g.strategies(i)) for i in range(g.n))
                phi = potential(g, s, kind)
                for i in range(g.n):
                    cur = player_cost(g, s, i)
                    for dev in g.strategies(i):
                        if improves_beyond(cur, deviation_cost(g, s, i, dev), beta, squared):
                            descents += 1
                            moved = s[:i] + (dev,) + s[i + 1:]
                            violations += not potential(g, moved, kind) < phi
            cert = approx_solve(g, kind)
            failed += not (cert.passed and cert.beta == beta and cert.squared == squared)
        stats[kind] = (descents, violations, failed)
    ok = all(v == 0 and f == 0 for _, v, f in stats.values())
    detail = " ".join(f"{k}:improving_deviations={d},violations={v},cert_fail={f}" for k, (d, v, f) in stats.items())
    return ok, time.perf_counter() - t, detail


def test_criterion_7_approx_descent(report):
    ok, elapsed, detail = check_7()
    assert report(7, "beta-improvements descend the potentials; certificates pass", ok, elapsed,
                  120, detail)


# -- 8 ----------------------------------------------------------------------------------

def check_8():
    t = time.perf_counter()
    rng = random.Random(8)
    misses = {"singleton": 0, "pure-pref": 0, "monotone": 0}
    for _ in range(200):
        n, m = rng.randint(1, 4), rng.randint(2, 6)
        g = random_singleton_game(rng, n, m)
        misses["singleton"] += solve_singleton(g) not in enumerate_pne(g)
        g = random_matroid_game(rng, n, m, alphas="pure")
        misses["pure-pref"] += solve_pure_preferences(g) not in enumerate_pne(g)
        g = random_matroid_game(rng, n, m, monotone=True)
        misses["monotone"] += solve_monotone_dependence(g) not in enumerate_pne(g)
    ok = not any(misses.values())
    return ok, time.perf_counter() - t, f"games=3x200 misses={misses}"


def test_criterion_8_solver_oracle(report):
    ok, elapsed, detail = check_8()
    assert report(8, "specialised solvers return enumerated PNE", ok, elapsed, 120, detail)


# -- 9 ----------------------------------------------------------------------------------

def small_graphs():
    """Simple graphs on at most 4 vertices, max degree >= 2, no isolated
    vertex, one per isomorphism class."""
    seen = set()
    for nv in (3, 4):
        vertices = list(range(1, nv + 1))
        pairs = list(itertools.combinations(vertices, 2))
        for r in range(len(pairs) + 1):
            for edges in itertools.combinations(pairs, r):
                degrees = [sum(v in e for e in edges) for v in vertices]
                if max(degrees, default=0) < 2 or min(degrees) == 0:
                    continue
                canon = min(tuple(sorted(tuple(sorted((p[a - 1], p[b - 1]))) for a, b in edges))
                            for p in itertools.permutations(vertices))
                if (nv, canon) not in seen:
                    seen.add((nv, canon))
                    yield vertices, list(edges)


def check_9():
    t = time.perf_counter()
    mismatches, checked = [], 0
    for vertices, edges in small_graphs():
        for k in range(0, len(vertices) + 1):
            g = gadgets.GraphInstance.from_edges(edges, k, vertices)
            game = gadgets.build_is_reduction(g)
            expected = gadgets.max_independent_set(g) >= k
            found = has_pne(game, cap=10**8)
            checked += 1
            if found != expected:
                mismatches.append(f"edges={edges} k={k} pne={found} is>=k={expected}")
    detail = f"instances={checked} mismatches={len(mismatches)}"
    if mismatches:
        detail += " :: " + "; ".join(mismatches)
    return not mismatches, time.perf_counter() - t, detail


def test_criterion_9_is_reduction(report):
    ok, elapsed, detail = check_9()
    assert report(9, "reduction has a PNE iff the graph has an independent set of size k",
                  ok, elapsed, 600, detail)


if __name__ == "__main__":
    for number in range(1, 10):
        check = globals()[f"check_{number}"]
        ok, elapsed, detail = check()
        _report(number, check.__name__, ok, elapsed,
                {4: 300, 5: 30, 6: 60, 7: 120, 8: 120, 9: 600}.get(number, 1), detail)
