"""Best responses, improvement dynamics, cycle detection and the rank potential."""

from __future__ import annotations

import collections
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from mixedcongestion.errors import CapExceededError, InapplicableError, IntractableError
from mixedcongestion.game import (
    Game, State, congestion, congestion_without, deviation_cost, player_cost, replace,
)
from mixedcongestion.matroid import ENUMERATION_CAP

RULES = ("better_response", "best_response", "lazy_best_response")
SCHEDULERS = ("round_robin", "random", "max_gain")
_ALIASES = {
    "better": "better_response", "best": "best_response", "lazy": "lazy_best_response",
    "rr": "round_robin", "maxgain": "max_gain", "max-gain": "max_gain",
    "round-robin": "round_robin",
}


def _canon(name: str, allowed: tuple[str, ...]) -> str:
    name = _ALIASES.get(name, name)
    if name not in allowed:
        raise ValueError(f"unknown option {name!r}; expected one of {allowed}")
    return name


# -- best responses ------------------------------------------------------------

def _greedy_route(game: Game, i: int) -> Optional[str]:
    alpha = game.players[i].alpha
    if alpha == 0:
        return "bottleneck"
    if alpha == 1 or game.has_monotone_dependence:
        return "latency"
    return None


def _uses_enumeration(game: Game, i: int, cap: int, method: str) -> bool:
    p = game.players[i]
    if not p.is_matroid_space or method == "enumerate":
        return True
    if method == "greedy":
        return False
    return len(p.space.ground) <= cap


def _element_weights(game: Game, i: int, others, route: str) -> dict[str, Fraction]:
    out = {}
    for rid in game.players[i].space.ground:
        res = game.resource(rid)
        fn = res.latency if route == "latency" else res.bottleneck
        out[rid] = fn(others[rid] + 1)
    return out


def _greedy_best(game: Game, state: State, i: int, others, lazy: bool) -> frozenset:
    route = _greedy_route(game, i)
    if route is None:
        raise IntractableError(i)
    m = game.players[i].space
    w = _element_weights(game, i, others, route)
    current = state[i]
    if route == "latency":
        # for alpha > 0 under monotone dependence (or alpha = 1) the best
        # responses are exactly the min-sum bases; prefer current elements
        return m.greedy_min_basis(w, prefer=current if lazy else ())
    # alpha = 0: best responses are the bases whose heaviest element is at most
    # the min-max value, which the min-sum basis attains
    top = max(w[e] for e in m.greedy_min_basis(w))
    if not lazy:
        return m.greedy_min_basis(w)
    tiers = {e: (0 if w[e] <= top and e in current else 1 if w[e] <= top else 2)
             for e in m.ground}
    return m.greedy_min_basis(tiers)


def deviation_costs(game: Game, state: State, i: int, cap: int = ENUMERATION_CAP):
    """``[(strategy, cost)]`` for every strategy of player ``i``, others fixed."""
    p = game.players[i]
    if p.is_matroid_space and len(p.space.ground) > cap:
        raise IntractableError(i, "strategy space too large to enumerate")
    others = congestion_without(game, state, i)
    return [(s, deviation_cost(game, state, i, s, others)) for s in game.strategies(i)]


def best_responses(game: Game, state: State, i: int, cap: int = ENUMERATION_CAP,
                   method: str = "auto") -> list[frozenset]:
    """All cost-minimising strategies of player ``i`` in canonical order.

    Matroid spaces above ``cap`` (or with ``method="greedy"``) are handled by
    the greedy algorithm, which yields a single representative; this needs
    ``alpha_i`` in {0, 1} or a monotone dependence.
    """
    if _uses_enumeration(game, i, cap, method):
        scored = deviation_costs(game, state, i, cap=max(cap, _ground(game, i)))
        low = min(c for _, c in scored)
        return [s for s, c in scored if c == low]
    others = congestion_without(game, state, i)
    return [_greedy_best(game, state, i, others, lazy=False)]


def _ground(game: Game, i: int) -> int:
    p = game.players[i]
    return len(p.space.ground) if p.is_matroid_space else 0


def best_response_cost(game: Game, state: State, i: int, cap: int = ENUMERATION_CAP) -> Fraction:
    br = best_responses(game, state, i, cap)
    return deviation_cost(game, state, i, br[0])


def lazy_best_response(game: Game, state: State, i: int, cap: int = ENUMERATION_CAP,
                       method: str = "auto") -> frozenset:
    """Best response sharing as many resources as possible with the current one."""
    current = state[i]
    if _uses_enumeration(game, i, cap, method):
        brs = best_responses(game, state, i, cap, method="enumerate" if method == "greedy" else method)
        if current in brs:
            return current
        best = max(len(s & current) for s in brs)
        return min((s for s in brs if len(s & current) == best), key=game.sort_key)
    others = congestion_without(game, state, i)
    return _greedy_best(game, state, i, others, lazy=True)


def is_improving(game: Game, state: State, i: int, cap: int = ENUMERATION_CAP) -> bool:
    return player_cost(game, state, i) > best_response_cost(game, state, i, cap)


def is_pne(game: Game, state: State, cap: int = ENUMERATION_CAP) -> bool:
    game.check_state(state)
    return not any(is_improving(game, state, i, cap) for i in range(game.n))


# -- dynamics -------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    player: int
    before: frozenset
    after: frozenset
    cost_before: Fraction
    cost_after: Fraction
    state: State  # the state reached by this step


@dataclass
class DynamicsTrace:
    """Result of :func:`run_dynamics`.

    ``verdict`` is ``"converged"``, ``"cycle"`` or ``"step_cap"``; for a cycle
    ``cycle_start`` indexes :attr:`states` at the revisited state.
    """

    start: State
    steps: list[Step] = field(default_factory=list)
    verdict: str = "step_cap"
    cycle_start: Optional[int] = None

    @property
    def states(self) -> list[State]:
        return [self.start] + [s.state for s in self.steps]

    @property
    def final(self) -> State:
        return self.states[-1]

    @property
    def cycle_length(self) -> Optional[int]:
        if self.verdict != "cycle":
            return None
        return len(self.steps) - self.cycle_start


def _pick_move(game, state, i, rule, cap):
    if rule == "lazy_best_response":
        return lazy_best_response(game, state, i, cap)
    if rule == "best_response":
        return best_responses(game, state, i, cap)[0]
    current = player_cost(game, state, i)
    p = game.players[i]
    if p.is_matroid_space and len(p.space.ground) > cap:
        return lazy_best_response(game, state, i, cap)
    for s, c in deviation_costs(game, state, i, cap):
        if c < current:
            return s
    return state[i]


def _gain(game, state, i, cap):
    cur = player_cost(game, state, i)
    low = best_response_cost(game, state, i, cap)
    if cur <= low:
        return None
    return float("inf") if low == 0 else cur / low


def run_dynamics(game: Game, start: State, rule: Optional[str] = None,
                 scheduler: str = "round_robin", seed: Optional[int] = None,
                 max_steps: int = 10_000, cap: int = ENUMERATION_CAP) -> DynamicsTrace:
    """Iterate improvement steps until a PNE, a revisited state or ``max_steps``.

    ``rule`` defaults to lazy best responses when some player has
    ``alpha = 0`` and to plain best responses otherwise.
    """
    game.check_state(start)
    has_zero = any(p.alpha == 0 for p in game.players)
    if rule is None:
        rule = "lazy_best_response" if has_zero else "best_response"
    rule = _canon(rule, RULES)
    scheduler = _canon(scheduler, SCHEDULERS)
    if has_zero and rule != "lazy_best_response":
        warnings.warn("players with alpha = 0 present; non-lazy best responses "
                      "may increase the potential", stacklevel=2)
    rng = random.Random(seed)
    trace = DynamicsTrace(start=start)
    seen = {start: 0}
    state = start
    pointer = 0
    n = game.n
    while len(trace.steps) < max_steps:
        if scheduler == "round_robin":
            mover = next((j % n for j in range(pointer, pointer + n)
                          if is_improving(game, state, j % n, cap)), None)
        elif scheduler == "random":
            movers = [j for j in range(n) if is_improving(game, state, j, cap)]
            mover = rng.choice(movers) if movers else None
        else:
            gains = [(g, -j) for j in range(n) if (g := _gain(game, state, j, cap)) is not None]
            mover = -max(gains)[1] if gains else None
        if mover is None:
            trace.verdict = "converged"
            return trace
        before = state[mover]
        cost_before = player_cost(game, state, mover)
        after = _pick_move(game, state, mover, rule, cap)
        state = replace(state, mover, after)
        cost_after = player_cost(game, state, mover)
        assert cost_after < cost_before, "improvement step did not improve"
        trace.steps.append(Step(mover, before, after, cost_before, cost_after, state))
        pointer = mover + 1
        if state in seen:
            trace.verdict = "cycle"
            trace.cycle_start = seen[state]
            return trace
        seen[state] = len(trace.steps)
    trace.verdict = "step_cap"
    return trace


def _fmt(x) -> str:
    if x == float("inf"):
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_trace(game: Game, trace: DynamicsTrace) -> str:
    """Line-oriented export; players are numbered from 1."""
    lines = []
    for k, st in enumerate(trace.steps, 1):
        lines.append(
            f"step={k} player={st.player + 1} from={game.format_strategy(st.before)} "
            f"to={game.format_strategy(st.after)} cost_before={_fmt(st.cost_before)} "
            f"cost_after={_fmt(st.cost_after)}")
    if trace.verdict == "cycle":
        lines.append(f"verdict=cycle@{trace.cycle_start}")
    else:
        lines.append(f"verdict={trace.verdict}")
    return "\n".join(lines) + "\n"


# -- weak acyclicity --------------------------------------------------------------

@dataclass
class ProbeResult:
    """``path`` runs from the start state to a PNE, or is ``None``.

    ``exhaustive`` is true when the whole reachable best-response graph was
    searched, so ``path is None`` then proves no PNE is reachable.
    """

    path: Optional[list[State]]
    exhaustive: bool
    explored: int = 0


def weakly_acyclic_probe(game: Game, start: State, budget: int = 100,
                         cap: int = 10**6, max_steps: int = 10_000) -> ProbeResult:
    """Look for some best-response improvement path from ``start`` to a PNE."""
    game.check_state(start)
    if game.state_count() <= cap:
        parent: dict[State, Optional[State]] = {start: None}
        queue = collections.deque([start])
        while queue:
            state = queue.popleft()
            movers = [i for i in range(game.n) if is_improving(game, state, i)]
            if not movers:
                path = [state]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return ProbeResult(path[::-1], True, len(parent))
            for i in movers:
                for s in best_responses(game, state, i):
                    nxt = replace(state, i, s)
                    if nxt not in parent:
                        parent[nxt] = state
                        queue.append(nxt)
        return ProbeResult(None, True, len(parent))
    rule = "lazy_best_response" if any(p.alpha == 0 for p in game.players) else "best_response"
    for seed in range(budget):
        trace = run_dynamics(game, start, rule, "random", seed=seed, max_steps=max_steps)
        if trace.verdict == "converged":
            return ProbeResult(trace.states, False, seed + 1)
    return ProbeResult(None, False, budget)


# -- potential ---------------------------------------------------------------------

def latency_ranks(game: Game) -> dict[Fraction, int]:
    """Dense 1-based rank of every latency value a resource can take."""
    values = sorted({r.latency(x) for r, x in game.reachable_loads()})
    return {v: k for k, v in enumerate(values, 1)}


def rank_potential(game: Game, state: State, ranks: Optional[dict] = None) -> int:
    """Rosenthal-style potential over latency *ranks* instead of values.

    Strictly decreases along lazy best responses in matroid games whose
    bottleneck costs are a monotone function of their latency costs.
    """
    if not (game.is_matroid and game.has_monotone_dependence):
        raise InapplicableError("rank potential needs a matroid game with monotone dependence")
    if ranks is None:
        ranks = latency_ranks(game)
    counts = congestion(game, state)
    total = 0
    for r in game.resources:
        for x in range(1, counts[r.id] + 1):
            total += ranks[r.latency(x)]
    return total
