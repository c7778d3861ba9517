"""Games, states and exact cost evaluation for congestion games with mixed objectives.

A player's cost mixes the *sum* of latency costs with the *maximum* of
bottleneck costs over the resources she allocates::

    cost_i(S) = alpha_i * sum(latency_r(n_r)) + (1 - alpha_i) * max(bottleneck_r(n_r))

All arithmetic is done with :class:`fractions.Fraction` so that ties are
detected exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from mixedcongestion.errors import CostEvaluationError, GameError, InvalidStateError
from mixedcongestion.matroid import MatroidHandle, exchange_property_holds

Strategy = frozenset
State = tuple  # tuple[frozenset[str], ...], one allocated resource set per player

#: explicit strategy lists longer than this are not checked for the matroid property
EXPLICIT_MATROID_CHECK_CAP = 5000


def as_fraction(value) -> Fraction:
    """Convert ints, decimal strings, ``"p/q"`` strings and floats exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # base-10 expansion of the shortest repr, so 0.1 -> 1/10
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


@dataclass(frozen=True)
class CostFunction:
    """Non-decreasing map from congestion ``x >= 1`` to a non-negative cost.

    Either ``linear`` (``a*x + b``) or ``table`` (``values[x-1]``). Tables are
    not extrapolated: evaluating past the last entry raises.
    """

    kind: str
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    values: tuple[Fraction, ...] = ()

    @classmethod
    def linear(cls, a, b=0) -> "CostFunction":
        return cls("linear", a=as_fraction(a), b=as_fraction(b))

    @classmethod
    def table(cls, values: Iterable) -> "CostFunction":
        return cls("table", values=tuple(as_fraction(v) for v in values))

    @classmethod
    def constant(cls, c) -> "CostFunction":
        return cls.linear(0, c)

    def __post_init__(self):
        if self.kind not in ("linear", "table"):
            raise GameError(f"unknown cost function kind {self.kind!r}")

    def __call__(self, x: int) -> Fraction:
        if x < 1:
            raise CostEvaluationError(f"congestion must be >= 1, got {x}")
        if self.kind == "linear":
            return self.a * x + self.b
        if x > len(self.values):
            raise CostEvaluationError(
                f"congestion {x} exceeds table of length {len(self.values)}")
        return self.values[x - 1]

    def problems(self, upto: int | None = None) -> list[str]:
        """Invariant violations of this function (empty if fine)."""
        out = []
        if self.kind == "linear":
            if self.a < 0:
                out.append("non-monotone cost function (negative slope)")
            if self.b < 0 or self.a + self.b < 0:
                out.append("negative cost value")
            return out
        if not self.values:
            out.append("empty table")
        if any(v < 0 for v in self.values):
            out.append("negative cost value")
        if any(x > y for x, y in zip(self.values, self.values[1:])):
            out.append("non-monotone cost function")
        if upto is not None and len(self.values) < upto:
            out.append(f"table too short ({len(self.values)} entries, load up to {upto})")
        return out

    def __str__(self):
        if self.kind == "linear":
            return f"{self.a}*x+{self.b}"
        return "(" + ",".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True)
class Resource:
    id: str
    latency: CostFunction
    bottleneck: CostFunction


@dataclass(frozen=True)
class Player:
    """A player with preference ``alpha`` and a strategy space.

    ``space`` is either a tuple of explicit strategies (frozensets of
    resource ids) or a :class:`MatroidHandle` whose bases are the strategies.
    """

    alpha: Fraction
    space: Union[tuple[frozenset, ...], MatroidHandle]

    @classmethod
    def explicit(cls, alpha, strategies: Iterable[Iterable[str]]) -> "Player":
        return cls(as_fraction(alpha), tuple(frozenset(s) for s in strategies))

    @classmethod
    def on_matroid(cls, alpha, matroid: MatroidHandle) -> "Player":
        return cls(as_fraction(alpha), matroid)

    @property
    def is_matroid_space(self) -> bool:
        return isinstance(self.space, MatroidHandle)


@dataclass(frozen=True)
class Game:
    """Immutable congestion game with mixed objectives.

    Structural flags (``is_singleton`` and friends) are always derived from
    the content. Players are addressed by 0-based position.
    """

    players: tuple[Player, ...]
    resources: tuple[Resource, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        if isinstance(self.resources, Mapping):
            res = tuple(self.resources.values())
        else:
            res = tuple(self.resources)
        object.__setattr__(self, "resources", res)

    # -- lookup ---------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def m(self) -> int:
        return len(self.resources)

    @cached_property
    def resource_index(self) -> dict[str, int]:
        return {r.id: k for k, r in enumerate(self.resources)}

    def resource(self, rid: str) -> Resource:
        return self.resources[self.resource_index[rid]]

    def sort_key(self, strategy: Iterable[str]) -> tuple[int, ...]:
        """Ground-order key: a strategy is compared as its sorted index tuple."""
        idx = self.resource_index
        return tuple(sorted(idx[r] for r in strategy))

    def ordered(self, strategy: Iterable[str]) -> list[str]:
        return [self.resources[k].id for k in self.sort_key(strategy)]

    def strategies(self, i: int) -> list[frozenset]:
        """Player ``i``'s strategies in canonical order (explicit order, or
        lexicographic basis order for matroid spaces)."""
        return self._strategy_lists[i]

    @cached_property
    def _strategy_lists(self) -> list[list[frozenset]]:
        out = []
        for p in self.players:
            if p.is_matroid_space:
                out.append([frozenset(b) for b in p.space.enumerate_bases()])
            else:
                out.append(list(p.space))
        return out

    def strategy_count(self, i: int) -> int:
        p = self.players[i]
        if p.is_matroid_space:
            return p.space.basis_count()
        return len(p.space)

    def state_count(self) -> int:
        total = 1
        for i in range(self.n):
            total *= self.strategy_count(i)
        return total

    def first_state(self) -> State:
        """Every player on her first strategy; for matroids the greedy basis
        under equal weights, which is the lexicographically first one."""
        out = []
        for i, p in enumerate(self.players):
            if p.is_matroid_space:
                out.append(p.space.greedy_min_basis({e: 0 for e in p.space.ground}))
            else:
                out.append(p.space[0])
        return tuple(out)

    def states(self) -> Iterable[State]:
        """All states, player 1 most significant."""
        return itertools.product(*(self.strategies(i) for i in range(self.n)))

    def make_state(self, choices: Sequence) -> State:
        """Build a state from per-player choices.

        Each choice is either an ``int`` (position in the player's strategy
        list) or an iterable of resource ids.
        """
        if len(choices) != self.n:
            raise GameError(f"state has {len(choices)} entries, game has {self.n} players")
        out = []
        for i, c in enumerate(choices):
            if isinstance(c, int):
                strats = self.strategies(i)
                if not 0 <= c < len(strats):
                    raise InvalidStateError(i, f"strategy index {c} out of range")
                out.append(strats[c])
            else:
                out.append(frozenset(c))
        state = tuple(out)
        self.check_state(state)
        return state

    def check_state(self, state: State) -> None:
        if len(state) != self.n:
            raise GameError(f"state has {len(state)} entries, game has {self.n} players")
        for i, s in enumerate(state):
            if not self.is_strategy(i, s):
                raise InvalidStateError(i, f"{self.format_strategy(s)} is not a strategy")

    def is_strategy(self, i: int, s) -> bool:
        p = self.players[i]
        if any(r not in self.resource_index for r in s):
            return False
        if p.is_matroid_space:
            return set(s) <= set(p.space.ground) and p.space.is_basis(s)
        return frozenset(s) in self._explicit_sets[i]

    @cached_property
    def _explicit_sets(self) -> list[frozenset]:
        return [frozenset(p.space) if not p.is_matroid_space else frozenset()
                for p in self.players]

    def format_strategy(self, s) -> str:
        return "+".join(self.ordered(s)) if s else "{}"

    def format_state(self, state: State) -> str:
        return "(" + ", ".join(self.format_strategy(s) for s in state) + ")"

    # -- structural flags ------------------------------------------------
    @cached_property
    def load_bound(self) -> dict[str, int]:
        """Largest congestion each resource can reach: the number of players
        whose strategy space mentions it."""
        out = {r.id: 0 for r in self.resources}
        for p in self.players:
            if p.is_matroid_space:
                used = set(p.space.ground)
            else:
                used = set().union(*p.space) if p.space else set()
            for rid in used:
                if rid in out:
                    out[rid] += 1
        return out

    def reachable_loads(self):
        """``(resource, x)`` for every congestion ``x`` a resource can take."""
        for r in self.resources:
            for x in range(1, self.load_bound[r.id] + 1):
                yield r, x

    @cached_property
    def max_strategy_size(self) -> int:
        """``d``: the largest number of resources any player can allocate."""
        d = 0
        for p in self.players:
            if p.is_matroid_space:
                d = max(d, p.space.rank())
            else:
                d = max(d, max((len(s) for s in p.space), default=0))
        return d

    @cached_property
    def is_singleton(self) -> bool:
        for p in self.players:
            if p.is_matroid_space:
                if p.space.rank() != 1:
                    return False
            elif any(len(s) != 1 for s in p.space):
                return False
        return True

    @cached_property
    def is_matroid(self) -> bool:
        for p in self.players:
            if p.is_matroid_space:
                continue
            if len(p.space) > EXPLICIT_MATROID_CHECK_CAP:
                return False
            if not exchange_property_holds(p.space):
                return False
        return True

    @cached_property
    def has_pure_preferences(self) -> bool:
        return all(p.alpha in (0, 1) for p in self.players)

    @cached_property
    def is_alpha_uniform(self) -> bool:
        return len({p.alpha for p in self.players}) <= 1

    @property
    def uniform_alpha(self) -> Fraction:
        if not self.is_alpha_uniform:
            raise GameError("players are not alpha-uniform")
        return self.players[0].alpha if self.players else Fraction(1)

    @cached_property
    def latency_equals_bottleneck(self) -> bool:
        """True iff ``e_r(x) == l_r(x)`` for every resource and ``x = 1..n``."""
        return all(r.latency(x) == r.bottleneck(x) for r, x in self.reachable_loads())

    @cached_property
    def has_monotone_dependence(self) -> bool:
        return check_monotone_dependence(self)[0]

    @cached_property
    def flags(self) -> dict[str, bool]:
        return {
            "is_singleton": self.is_singleton,
            "is_matroid": self.is_matroid,
            "has_pure_preferences": self.has_pure_preferences,
            "is_alpha_uniform": self.is_alpha_uniform,
            "has_monotone_dependence": self.has_monotone_dependence,
        }


def check_monotone_dependence(game: Game):
    """Test whether ``e_r(x) = f(l_r(x))`` for one non-decreasing ``f``.

    Only congestions a resource can actually reach are considered.

    Returns ``(holds, witness)``; the witness is a pair of
    ``(resource, x, latency, bottleneck)`` tuples that no such ``f`` can
    reconcile, or ``None``.
    """
    pairs = [(r.latency(x), r.bottleneck(x), r.id, x) for r, x in game.reachable_loads()]
    pairs.sort(key=lambda t: (t[0], t[1]))
    # after sorting by (latency, bottleneck) any violation shows up between
    # neighbours: equal latency with different bottleneck, or a drop in bottleneck
    for (l1, e1, r1, x1), (l2, e2, r2, x2) in zip(pairs, pairs[1:]):
        if e2 < e1 or (l1 == l2 and e1 != e2):
            return False, ((r1, x1, l1, e1), (r2, x2, l2, e2))
    return True, None


# -- evaluation -----------------------------------------------------------

def congestion(game: Game, state: State, check: bool = True) -> dict[str, int]:
    """Number of players allocating each resource."""
    if check:
        game.check_state(state)
    counts = {r.id: 0 for r in game.resources}
    for s in state:
        for r in s:
            counts[r] += 1
    return counts


def _parts(game: Game, state: State, i: int, counts=None):
    if counts is None:
        counts = congestion(game, state)
    lat = Fraction(0)
    bot = None
    for rid in state[i]:
        res = game.resource(rid)
        x = counts[rid]
        lat += res.latency(x)
        e = res.bottleneck(x)
        if bot is None or e > bot:
            bot = e
    return lat, (bot if bot is not None else Fraction(0))


def latency_sum(game: Game, state: State, i: int) -> Fraction:
    return _parts(game, state, i)[0]


def bottleneck_max(game: Game, state: State, i: int) -> Fraction:
    return _parts(game, state, i)[1]


def player_cost(game: Game, state: State, i: int, counts=None) -> Fraction:
    """Exact cost of player ``i`` in ``state``."""
    lat, bot = _parts(game, state, i, counts)
    a = game.players[i].alpha
    return a * lat + (1 - a) * bot


def all_costs(game: Game, state: State) -> tuple[Fraction, ...]:
    counts = congestion(game, state)
    return tuple(player_cost(game, state, i, counts) for i in range(game.n))


def deviation_cost(game: Game, state: State, i: int, strategy, others=None) -> Fraction:
    """Cost of player ``i`` after switching to ``strategy``, others fixed.

    ``others`` may carry precomputed congestion of all players except ``i``.
    """
    if others is None:
        others = congestion_without(game, state, i)
    lat = Fraction(0)
    bot = None
    for rid in strategy:
        res = game.resource(rid)
        x = others[rid] + 1
        lat += res.latency(x)
        e = res.bottleneck(x)
        if bot is None or e > bot:
            bot = e
    a = game.players[i].alpha
    return a * lat + (1 - a) * (bot if bot is not None else Fraction(0))


def congestion_without(game: Game, state: State, i: int) -> dict[str, int]:
    counts = {r.id: 0 for r in game.resources}
    for j, s in enumerate(state):
        if j != i:
            for r in s:
                counts[r] += 1
    return counts


def replace(state: State, i: int, strategy) -> State:
    return state[:i] + (frozenset(strategy),) + state[i + 1:]


# -- validation -------------------------------------------------------------

def validate(game: Game) -> list[str]:
    """Every violated invariant as a human-readable line; empty iff valid."""
    problems: list[str] = []
    seen: set[str] = set()
    for r in game.resources:
        if r.id in seen:
            problems.append(f"resource {r.id}: duplicate id")
        seen.add(r.id)
        for label, fn in (("latency", r.latency), ("bottleneck", r.bottleneck)):
            for msg in fn.problems(upto=game.load_bound.get(r.id, 0)):
                problems.append(f"resource {r.id}: {label}: {msg}")
    for i, p in enumerate(game.players):
        who = f"player {i + 1}"
        if not 0 <= p.alpha <= 1:
            problems.append(f"{who}: alpha {p.alpha} outside [0, 1]")
        if p.is_matroid_space:
            m = p.space
            missing = [e for e in m.ground if e not in seen]
            if missing:
                problems.append(f"{who}: matroid ground references unknown resources {missing}")
            problems.extend(f"{who}: {msg}" for msg in m.problems())
            if m.rank() == 0:
                problems.append(f"{who}: empty strategy (matroid of rank 0)")
            continue
        if not p.space:
            problems.append(f"{who}: empty strategy space")
        if len(set(p.space)) != len(p.space):
            problems.append(f"{who}: duplicate strategies")
        for s in p.space:
            if not s:
                problems.append(f"{who}: empty strategy")
            unknown = sorted(r for r in s if r not in seen)
            if unknown:
                problems.append(f"{who}: strategy references unknown resources {unknown}")
    return problems
