from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import state_of
from mixedcongestion import gadgets
from mixedcongestion.errors import CostEvaluationError, InvalidStateError
from mixedcongestion.game import (
    CostFunction, Game, Player, Resource, all_costs, as_fraction, bottleneck_max,
    check_monotone_dependence, congestion, latency_sum, player_cost, validate,
)
from mixedcongestion.generators import random_explicit_game, random_matroid_game

lin = CostFunction.linear
tab = CostFunction.table


# -- numbers and cost functions -----------------------------------------------------

@pytest.mark.parametrize("raw, expected", [
    (3, Fraction(3)), ("1/2", Fraction(1, 2)), ("0.1", Fraction(1, 10)),
    (0.25, Fraction(1, 4)), (0.1, Fraction(1, 10)), (Fraction(2, 3), Fraction(2, 3)),
])
def test_as_fraction_is_exact(raw, expected):
    assert as_fraction(raw) == expected


def test_linear_and_table_evaluation():
    assert lin(3, 2)(4) == 14
    assert tab([1, "5/2"])(2) == Fraction(5, 2)


def test_table_does_not_extrapolate():
    f = tab([1, 2])
    with pytest.raises(CostEvaluationError):
        f(3)
    with pytest.raises(CostEvaluationError):
        f(0)


def test_cost_function_problems():
    assert "non-monotone cost function" in tab([3, 1]).problems()
    assert any("negative" in p for p in lin(1, -2).problems())
    assert any("table too short" in p for p in tab([1, 2]).problems(upto=3))
    assert lin(2, 1).problems(upto=100) == []


# -- validate ------------------------------------------------------------------

def test_validate_accepts_gadgets():
    for build in gadgets.GADGETS.values():
        assert validate(build()) == []


def test_validate_reports_decreasing_table():
    g = Game([Player.explicit(1, [{"r"}])], [Resource("r", tab([3, 1]), lin(1))])
    problems = validate(g)
    assert len(problems) == 1
    assert "resource r" in problems[0] and "non-monotone" in problems[0]


def test_validate_reports_short_table_in_three_player_game():
    res = [Resource("r", tab([1, 2]), lin(1))]
    g = Game([Player.explicit(1, [{"r"}])] * 3, res)
    assert any("table too short" in p for p in validate(g))


def test_validate_table_length_follows_reachable_load():
    # three players, but only two of them can ever use r1
    assert validate(gadgets.build_thm5()) == []


def test_validate_reports_unknown_resource_and_alpha():
    g = Game([Player.explicit(2, [{"r", "zz"}])], [Resource("r", lin(1), lin(1))])
    problems = validate(g)
    assert any("unknown resources ['zz']" in p for p in problems)
    assert any("alpha 2 outside" in p for p in problems)


# -- congestion and costs ----------------------------------------------------------

def test_congestion_thm5():
    g = gadgets.build_thm5()
    s = state_of(g, ["r1"], ["r1"], ["r2"])
    assert congestion(g, s) == {"r1": 2, "r2": 1, "r3": 0}


def test_congestion_thm2():
    g = gadgets.build_thm2()
    s = state_of(g, ["r4", "r5", "r6"], ["r4", "r5"])
    assert congestion(g, s) == {"r1": 0, "r2": 0, "r3": 0, "r4": 2, "r5": 2,
                                "r6": 1, "r7": 0}


def test_congestion_disjoint_strategies():
    g = Game([Player.explicit(1, [{"a"}]), Player.explicit(1, [{"b", "c"}])],
             [Resource(r, lin(1), lin(1)) for r in "abc"])
    assert set(congestion(g, g.first_state()).values()) == {1}


def test_invalid_state_names_player():
    g = gadgets.build_thm5()
    with pytest.raises(InvalidStateError, match="player 2"):
        g.check_state(state_of(g, ["r1"], ["r2"], ["r2"]))


def test_thm2_costs():
    g = gadgets.build_thm2()
    s = state_of(g, ["r1", "r2", "r3"], ["r4", "r5"])
    assert player_cost(g, s, 0) == 100
    assert player_cost(g, s, 1) == 45


def test_single_player_single_resource():
    g = Game([Player.explicit(1, [{"r"}])], [Resource("r", lin(1), lin(1))])
    assert player_cost(g, g.first_state(), 0) == 1


def test_thm4b_shared_r2_player2():
    g = gadgets.build_thm4b()
    s = state_of(g, ["r1", "r2", "r4"], ["r2", "r5"])
    assert player_cost(g, s, 1) == 38


def test_thm4a_aggregates():
    g = gadgets.build_thm4a()
    s = state_of(g, ["r1"], ["r2", "r3", "r4"])
    assert latency_sum(g, s, 1) == 6
    assert bottleneck_max(g, s, 1) == 2


def test_single_resource_aggregates_coincide():
    g = Game([Player.explicit(Fraction(1, 3), [{"r"}])], [Resource("r", lin(5), lin(5))])
    s = g.first_state()
    assert latency_sum(g, s, 0) == bottleneck_max(g, s, 0) == player_cost(g, s, 0) == 5


def test_thm7_bottleneck_player_pays_dearer_pair():
    g = gadgets.build_thm7()
    rng = random.Random(3)
    for _ in range(20):
        s = tuple(rng.choice(g.strategies(i)) for i in range(g.n))
        cong = congestion(g, s)
        for i in (4, 5):
            pairs = [r for r in s[i] if "-" in r]
            assert len(pairs) == 2
            assert bottleneck_max(g, s, i) == max(cong[r] for r in pairs)
            assert player_cost(g, s, i) == bottleneck_max(g, s, i)


# -- flags -----------------------------------------------------------------------

def test_flags_of_gadgets():
    assert gadgets.build_thm5().is_singleton
    assert gadgets.build_thm5().has_pure_preferences
    assert gadgets.build_thm2().is_matroid
    assert gadgets.build_thm2().is_alpha_uniform
    assert not gadgets.build_thm4a().is_matroid
    assert gadgets.build_thm4a().latency_equals_bottleneck
    assert gadgets.build_thm7().max_strategy_size == 10


def test_monotone_dependence_thm2_witness():
    holds, witness = check_monotone_dependence(gadgets.build_thm2())
    assert not holds
    assert set(witness) == {("r7", 1, 0, 160), ("r1", 1, 0, 200)}


def test_monotone_dependence_trivial_cases():
    same = Game([Player.explicit(1, [{"a"}, {"b"}])] * 2,
                [Resource("a", lin(1), lin(1)), Resource("b", lin(2, 1), lin(2, 1))])
    assert check_monotone_dependence(same)[0]
    single = Game([Player.explicit(0, [{"a"}])], [Resource("a", lin(1), tab([9]))])
    assert check_monotone_dependence(single)[0]


def test_monotone_dependence_rejects_decreasing_map():
    g = Game([Player.explicit(1, [{"a"}, {"b"}])],
             [Resource("a", lin(1), lin(5)), Resource("b", lin(2), lin(1))])
    assert not check_monotone_dependence(g)[0]


# -- invariants on random games ------------------------------------------------------

def _random_game(seed):
    rng = random.Random(seed)
    if seed % 2:
        return random_explicit_game(rng, rng.randint(1, 4), rng.randint(2, 6)), rng
    return random_matroid_game(rng, rng.randint(1, 4), rng.randint(2, 6)), rng


def _random_state(game, rng):
    return tuple(rng.choice(game.strategies(i)) for i in range(game.n))


@given(st.integers(0, 10**9))
def test_decomposition_and_boundary_collapse(seed):
    g, rng = _random_game(seed)
    s = _random_state(g, rng)
    for i, p in enumerate(g.players):
        ls, bm = latency_sum(g, s, i), bottleneck_max(g, s, i)
        assert player_cost(g, s, i) == p.alpha * ls + (1 - p.alpha) * bm
        for alpha, expected in ((1, ls), (0, bm)):
            players = list(g.players)
            players[i] = Player(alpha, p.space)
            assert player_cost(Game(players, g.resources), s, i) == expected


@given(st.integers(0, 10**9))
def test_conservation(seed):
    g, rng = _random_game(seed)
    s = _random_state(g, rng)
    assert sum(congestion(g, s).values()) == sum(len(x) for x in s)


@given(st.integers(0, 10**9))
def test_joining_more_resources_never_lowers_others_costs(seed):
    rng = random.Random(seed)
    n, m = rng.randint(2, 4), rng.randint(2, 5)
    g = random_explicit_game(rng, n, m)
    names = [r.id for r in g.resources]
    # player j grows her strategy; everybody else is pinned
    j = rng.randrange(n)
    small = frozenset(rng.sample(names, 1))
    big = small | frozenset(rng.sample(names, rng.randint(1, m)))
    players = list(g.players)
    players[j] = Player.explicit(g.players[j].alpha, [small, big])
    g = Game(players, g.resources)
    s = _random_state(g, rng)
    lo = s[:j] + (small,) + s[j + 1:]
    hi = s[:j] + (big,) + s[j + 1:]
    for i in range(n):
        if i != j:
            assert player_cost(g, hi, i) >= player_cost(g, lo, i)


def test_all_costs_matches_player_cost():
    g = gadgets.build_thm4a()
    s = state_of(g, ["r2", "r3", "r4", "r5"], ["r5", "r6"])
    assert all_costs(g, s) == (8, 11)
