"""Pure Nash equilibria: enumeration, certification, the polynomial-time
solvers for the tractable classes, and approximate equilibria."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from mixedcongestion import dynamics
from mixedcongestion._engine import StateSpace
from mixedcongestion.errors import InapplicableError, SolverError
from mixedcongestion.game import (
    Game, State, check_monotone_dependence, congestion, congestion_without,
    deviation_cost, player_cost, replace,
)
from mixedcongestion.matroid import ENUMERATION_CAP, MatroidHandle

PNE_CAP = 10**7
POTENTIAL_KINDS = ("mixed", "square", "sum", "rank", "matroid")

__all__ = [
    "Certificate", "certify", "enumerate_pne", "has_pne", "beta_sweep",
    "solve_singleton", "solve_pure_preferences", "solve_monotone_dependence",
    "check_monotone_dependence", "approx_solve", "potential", "approx_threshold",
    "improves_beyond", "format_certificate",
]


# -- certification ----------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """How far ``state`` is from equilibrium.

    ``beta_achieved`` is the largest factor by which a single player can cut
    her cost (``math.inf`` if some player can reach cost 0 from a positive
    cost). ``passed`` compares it with the requested ``beta``; when
    ``squared`` is set, ``beta`` holds the *square* of the target factor.
    """

    state: State
    beta_achieved: object
    worst_player: int
    worst_deviation: frozenset
    beta: Fraction
    squared: bool = False
    steps: Optional[int] = None

    @property
    def passed(self) -> bool:
        if self.beta_achieved == math.inf:
            return False
        if self.squared:
            return self.beta_achieved ** 2 <= self.beta
        return self.beta_achieved <= self.beta

    @property
    def is_pne(self) -> bool:
        return self.beta_achieved != math.inf and self.beta_achieved <= 1


def _ratio(cur: Fraction, low: Fraction):
    if low == 0:
        return Fraction(1) if cur == 0 else math.inf
    return cur / low


def certify(game: Game, state: State, beta=1, squared: bool = False,
            cap: int = ENUMERATION_CAP) -> Certificate:
    beta = Fraction(beta)
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta}")
    game.check_state(state)
    counts = congestion(game, state, check=False)
    worst = (Fraction(1), 0, state[0] if state else frozenset())
    for i in range(game.n):
        cur = player_cost(game, state, i, counts)
        br = dynamics.best_responses(game, state, i, cap)[0]
        ratio = _ratio(cur, deviation_cost(game, state, i, br))
        if ratio > worst[0] or (i == 0 and ratio == worst[0]):
            worst = (ratio, i, br)
    return Certificate(state, worst[0], worst[1], worst[2], beta, squared)


def format_certificate(game: Game, cert: Certificate) -> str:
    b = cert.beta_achieved
    shown = "inf" if b == math.inf else f"{b.numerator}/{b.denominator}"
    return (f"beta_achieved={shown} worst_player={cert.worst_player + 1} "
            f"worst_deviation={game.format_strategy(cert.worst_deviation)} "
            f"pass={'true' if cert.passed else 'false'}")


# -- exhaustive -------------------------------------------------------------------

def enumerate_pne(game: Game, cap: int = PNE_CAP) -> list[State]:
    """All pure Nash equilibria in lexicographic state order."""
    space = StateSpace(game, cap)
    return [space.state(space.decode(_arr(k))[0]) for k in space.pne_indices()]


def has_pne(game: Game, cap: int = PNE_CAP) -> bool:
    return bool(StateSpace(game, cap).pne_indices(limit=1))


def _arr(k):
    import numpy as np
    return np.array([k], dtype=np.int64)


@dataclass(frozen=True)
class BetaSweep:
    min_beta: object
    min_state: State
    max_beta: object
    max_state: State


def beta_sweep(game: Game, cap: int = PNE_CAP) -> BetaSweep:
    """Exact min and max of ``beta_achieved`` over every state of the game."""
    (lo, lo_state), (hi, hi_state) = StateSpace(game, cap).beta_extremes()
    return BetaSweep(lo, lo_state, hi, hi_state)


# -- player-specific matroid games ----------------------------------------------

class _PlayerSpecificMatroids:
    """Matroid game where player ``i`` pays ``sum weight(i, r, n_r)`` over her basis."""

    def __init__(self, game: Game, weight: Callable[[int, str, int], Fraction]):
        self.game = game
        self.weight = weight
        self.matroids = []
        for p in game.players:
            if p.is_matroid_space:
                self.matroids.append(p.space)
            else:
                self.matroids.append(MatroidHandle.explicit(p.space))
        self.ranks = [m.rank() for m in self.matroids]

    def _weights(self, i, counts, current):
        m = self.matroids[i]
        return {r: self.weight(i, r, counts[r] - (r in current) + 1) for r in m.ground}

    def _lazy(self, i, counts, current, limit):
        m = self.matroids[i]
        w = self._weights(i, counts, current)
        pos = m.position
        order = sorted(m.ground, key=lambda e: (w[e], e not in current, pos[e]))
        chosen = []
        for e in order:
            if len(chosen) == limit:
                break
            if m.is_independent(chosen + [e]):
                chosen.append(e)
        new = frozenset(chosen)
        return new, sum((w[e] for e in new), Fraction(0)), sum((w[e] for e in current), Fraction(0))

    def _settle(self, active, limits, bases, counts, budget, seen):
        while True:
            mover = None
            for i in active:
                new, new_cost, old_cost = self._lazy(i, counts, bases[i], limits[i])
                if new_cost < old_cost or len(bases[i]) < limits[i]:
                    mover = (i, new)
                    break
            if mover is None:
                return budget
            i, new = mover
            for r in bases[i]:
                counts[r] -= 1
            for r in new:
                counts[r] += 1
            bases[i] = new
            key = (tuple(limits), tuple(bases))
            if key in seen:
                raise SolverError("player-specific dynamics revisited a state")
            seen.add(key)
            budget -= 1
            if budget < 0:
                raise SolverError("player-specific dynamics exceeded the step bound")

    def insertion_solve(self, max_steps: int) -> State:
        """Add players one at a time and grow each newcomer's rank by one
        element at a time, settling with lazy best responses in between."""
        n = self.game.n
        counts = {r.id: 0 for r in self.game.resources}
        bases: list[frozenset] = [frozenset()] * n
        limits = [0] * n
        active: list[int] = []
        budget = max_steps
        for j in range(n):
            active.append(j)
            seen: set = set()
            for t in range(1, self.ranks[j] + 1):
                limits[j] = t
                budget = self._settle(active, limits, bases, counts, budget, seen)
        return tuple(bases)

    def descend(self, start: State, max_steps: int) -> State:
        n = self.game.n
        counts = congestion(self.game, start)
        bases = list(start)
        self._settle(list(range(n)), list(self.ranks), bases, counts, max_steps, set())
        return tuple(bases)


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise InapplicableError(f"game does not satisfy: {what}")


def _step_bound(game: Game) -> int:
    return 2 * game.n**2 * game.m**2 + game.n * game.m


def _mixed_weight(game: Game):
    def w(i, rid, x):
        a = game.players[i].alpha
        res = game.resource(rid)
        return a * res.latency(x) + (1 - a) * res.bottleneck(x)
    return w


def solve_singleton(game: Game) -> State:
    """PNE of a singleton game by inserting players one at a time.

    A newcomer takes her best resource; afterwards only players on the
    resource that just gained a user can be unhappy, and each of them moves
    at most once per insertion.
    """
    _require(game.is_singleton, "is_singleton")
    n, m = game.n, game.m
    cost = _mixed_weight(game)
    options = [[next(iter(s)) for s in game.strategies(i)] for i in range(n)]
    counts = {r.id: 0 for r in game.resources}
    where: list[Optional[str]] = [None] * n

    def best(i):
        here = where[i]
        return min(options[i], key=lambda r: cost(i, r, counts[r] + (r != here)))

    for j in range(n):
        r0 = best(j)
        where[j] = r0
        counts[r0] += 1
        bump = r0
        for _ in range(n * m + 1):
            unhappy = next((i for i in range(j + 1) if where[i] == bump
                            and cost(i, best(i), counts[best(i)] + (best(i) != bump))
                            < cost(i, bump, counts[bump])), None)
            if unhappy is None:
                break
            target = best(unhappy)
            counts[bump] -= 1
            counts[target] += 1
            where[unhappy] = target
            bump = target
        else:
            raise SolverError("singleton insertion exceeded n*m moves")
    state = tuple(frozenset([r]) for r in where)
    if not dynamics.is_pne(game, state):
        raise SolverError("singleton solver produced a non-equilibrium")
    return state


def solve_pure_preferences(game: Game) -> State:
    """PNE of a matroid game where every player has ``alpha`` 0 or 1.

    Bottleneck players are treated as minimising the *sum* of bottleneck
    costs, which on a matroid also minimises the maximum.
    """
    _require(game.is_matroid, "is_matroid")
    _require(game.has_pure_preferences, "has_pure_preferences")

    def w(i, rid, x):
        res = game.resource(rid)
        return res.latency(x) if game.players[i].alpha == 1 else res.bottleneck(x)

    state = _PlayerSpecificMatroids(game, w).insertion_solve(_step_bound(game))
    if not dynamics.is_pne(game, state):
        raise SolverError("pure-preference solver produced a non-equilibrium")
    return state


def solve_monotone_dependence(game: Game, start: Optional[State] = None) -> State:
    """PNE of a matroid game with monotone dependence via the latency-only game."""
    _require(game.is_matroid, "is_matroid")
    _require(game.has_monotone_dependence, "has_monotone_dependence")
    solver = _PlayerSpecificMatroids(game, lambda i, rid, x: game.resource(rid).latency(x))
    state = solver.descend(start or game.first_state(), _step_bound(game))
    if not dynamics.is_pne(game, state):
        raise SolverError("monotone-dependence solver produced a non-equilibrium")
    return state


def solve_player_specific(game: Game) -> State:
    """PNE of the player-specific game with per-resource costs
    ``alpha_i * l_r + (1 - alpha_i) * e_r`` summed over the basis."""
    _require(game.is_matroid, "is_matroid")
    return _PlayerSpecificMatroids(game, _mixed_weight(game)).insertion_solve(_step_bound(game))


# -- approximate equilibria ------------------------------------------------------------

def potential(game: Game, state: State, kind: str) -> Fraction:
    """Value of the named potential at ``state``."""
    if kind == "rank":
        return Fraction(dynamics.rank_potential(game, state))
    counts = congestion(game, state)
    if kind == "mixed":
        a = game.uniform_alpha
        term = lambda r, x: a * r.latency(x) + (1 - a) * r.bottleneck(x)
    elif kind == "square":
        term = lambda r, x: r.latency(x) ** 2
    elif kind == "sum":
        term = lambda r, x: r.latency(x)
    else:
        raise ValueError(f"unknown potential {kind!r}")
    return sum((term(r, x) for r in game.resources for x in range(1, counts[r.id] + 1)),
               Fraction(0))


def approx_threshold(game: Game, kind: str) -> tuple[Fraction, bool]:
    """``(beta, squared)`` guaranteed for ``kind``; for ``square`` the value is
    the squared factor ``d``."""
    d = Fraction(game.max_strategy_size)
    if kind in ("mixed", "matroid"):
        return d, False
    if kind == "square":
        return d, True
    if kind == "sum":
        a = game.uniform_alpha
        return d / (a * (d - 1) + 1), False
    if kind == "rank":
        return Fraction(1), False
    raise ValueError(f"unknown potential kind {kind!r}")


def check_applicable(game: Game, kind: str) -> None:
    if kind not in POTENTIAL_KINDS:
        raise ValueError(f"unknown potential kind {kind!r}")
    if kind in ("mixed", "sum"):
        _require(game.is_alpha_uniform, "is_alpha_uniform")
    if kind in ("square", "sum"):
        _require(game.latency_equals_bottleneck, "latency equals bottleneck")
    if kind in ("matroid", "rank"):
        _require(game.is_matroid, "is_matroid")
    if kind == "rank":
        _require(game.has_monotone_dependence, "has_monotone_dependence")


def improves_beyond(cur: Fraction, new: Fraction, beta: Fraction, squared: bool) -> bool:
    """Whether moving from cost ``cur`` to ``new`` beats the factor ``beta``."""
    if squared:
        return cur * cur > beta * new * new
    return cur > beta * new


def approx_solve(game: Game, kind: str, start: Optional[State] = None,
                 max_steps: int = 10**6, cap: int = ENUMERATION_CAP) -> Certificate:
    """Approximate PNE with the guarantee attached to ``kind``.

    ``mixed``, ``square`` and ``sum`` descend their potential with
    beta-improvement steps (players round-robin, deviations in canonical
    order, first qualifying one taken). ``matroid`` returns an equilibrium of
    the player-specific game; ``rank`` runs lazy best responses.
    """
    check_applicable(game, kind)
    beta, squared = approx_threshold(game, kind)
    if kind == "matroid":
        state = solve_player_specific(game)
        return _with_steps(certify(game, state, beta, cap=cap), None)
    if kind == "rank":
        trace = dynamics.run_dynamics(game, start or game.first_state(), "lazy_best_response",
                                      max_steps=max_steps, cap=cap)
        if trace.verdict != "converged":
            raise SolverError(f"lazy best responses ended with {trace.verdict}")
        return _with_steps(certify(game, trace.final, 1, cap=cap), len(trace.steps))
    state = start or game.first_state()
    game.check_state(state)
    steps = 0
    pointer = 0
    n = game.n
    while True:
        moved = False
        for j in range(pointer, pointer + n):
            i = j % n
            cur = player_cost(game, state, i)
            for s, c in dynamics.deviation_costs(game, state, i, cap):
                if improves_beyond(cur, c, beta, squared):
                    state = replace(state, i, s)
                    steps += 1
                    pointer = i + 1
                    moved = True
                    break
            if moved:
                break
        if not moved:
            break
        if steps >= max_steps:
            raise SolverError("approximate descent exceeded max_steps")
    return _with_steps(certify(game, state, beta, squared=squared, cap=cap), steps)


def _with_steps(cert: Certificate, steps) -> Certificate:
    return Certificate(cert.state, cert.beta_achieved, cert.worst_player, cert.worst_deviation,
                       cert.beta, cert.squared, steps)
