"""Concrete game instances: equilibrium-free gadgets, a cycling singleton
game, a game with no good approximate equilibrium, and the reduction from
Independent Set."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

from mixedcongestion.errors import GameError
from mixedcongestion.game import CostFunction, Game, Player, Resource
from mixedcongestion.matroid import MatroidHandle

HALF = Fraction(1, 2)
lin = CostFunction.linear
ZERO = CostFunction.constant(0)


def _res(rid, latency, bottleneck) -> Resource:
    return Resource(rid, latency, bottleneck)


def _thm2_resources(r7_bottleneck: int) -> list[Resource]:
    out = [_res(f"r{k}", ZERO, lin(200)) for k in (1, 2, 3)]
    out += [_res(f"r{k}", lin(20), lin(50)) for k in (4, 5)]
    out.append(_res("r6", lin(8), lin(80)))
    out.append(_res("r7", ZERO, lin(r7_bottleneck)))
    return out


def _thm2_players() -> list[Player]:
    return [
        Player.on_matroid(HALF, MatroidHandle.uniform([f"r{k}" for k in range(1, 7)], 3)),
        Player.on_matroid(HALF, MatroidHandle.uniform([f"r{k}" for k in range(4, 8)], 2)),
    ]


def build_thm2() -> Game:
    """Two-player matroid game (uniform matroids, alpha = 1/2) without PNE.

    Player 1 picks any 3 of r1..r6 (20 strategies), player 2 any 2 of
    r4..r7 (6 strategies).
    """
    return Game(_thm2_players(), _thm2_resources(160), name="thm2")


def build_thm2_restricted() -> Game:
    """The 2x2 core of :func:`build_thm2`: player 1 on ``{r1,r2,r3}`` or
    ``{r4,r5,r6}``, player 2 on ``{r4,r5}`` or ``{r6,r7}``."""
    players = [
        Player.explicit(HALF, [{"r1", "r2", "r3"}, {"r4", "r5", "r6"}]),
        Player.explicit(HALF, [{"r4", "r5"}, {"r6", "r7"}]),
    ]
    return Game(players, _thm2_resources(160), name="thm2-restricted")


def build_thm4a() -> Game:
    """Non-matroid game with pure preferences and ``e = l`` but no PNE."""
    costs = {"r1": 6, "r2": 2, "r3": 2, "r4": 2, "r5": 4, "r6": 3}
    resources = [_res(r, lin(c), lin(c)) for r, c in costs.items()]
    players = [
        Player.explicit(0, [{"r1"}, {"r2", "r3", "r4", "r5"}]),
        Player.explicit(1, [{"r2", "r3", "r4"}, {"r5", "r6"}]),
    ]
    return Game(players, resources, name="thm4a")


def build_thm4b() -> Game:
    """Non-matroid, alpha-uniform (1/2) game with ``e = l`` but no PNE."""
    fns = {"r1": lin(32), "r2": lin(14), "r3": lin(14), "r4": lin(12, 8), "r5": lin(12, 8)}
    resources = [_res(r, f, f) for r, f in fns.items()]
    players = [
        Player.explicit(HALF, [{"r1", "r2", "r4"}, {"r1", "r3", "r5"}]),
        Player.explicit(HALF, [{"r2", "r5"}, {"r3", "r4"}]),
    ]
    return Game(players, resources, name="thm4b")


def build_thm5(r1_bottleneck: Sequence = (0, 0)) -> Game:
    """Three-player singleton game with pure preferences whose best-response
    dynamics can cycle. ``r1``'s bottleneck cost only matters to players
    with alpha 1, so any table may be supplied."""
    tab = CostFunction.table
    resources = [
        _res("r1", tab([2, 5]), tab(r1_bottleneck)),
        _res("r2", tab([3, 4]), tab([1, 4])),
        _res("r3", tab([1, 6]), tab([2, 3])),
    ]
    players = [
        Player.explicit(1, [{"r1"}, {"r2"}]),
        Player.explicit(1, [{"r1"}, {"r3"}]),
        Player.explicit(0, [{"r2"}, {"r3"}]),
    ]
    return Game(players, resources, name="thm5")


# -- ten-player game without beta-approximate PNE for beta < 3 ------------------

GROUPS = ((1, 2, 3, 4), (7, 8, 9, 10))


def personal(i: int, j: int) -> str:
    return f"r{i}_{j}"


def pair(i: int, j: int, k: int, l: int) -> str:
    """Pair resource for players ``i < j`` of one group; ``k`` in {1, 2}
    selects player 5 or 6, ``l`` the strategy it stands for."""
    return f"r{i}-{j}_{k}{l}"


def build_thm7() -> Game:
    """Linear-cost game in which every state lets some player improve by 3.

    Players 1-4 and 7-10 (alpha = 1) choose between two personal resources;
    players 5 and 6 (alpha = 0) pick a side plus one pair resource per group.
    """
    pairs = [list(itertools.combinations(g, 2)) for g in GROUPS]
    resources = []
    for g in GROUPS:
        for i in g:
            for j in (1, 2):
                resources.append(_res(personal(i, j), lin(1), ZERO))
    for g, ps in zip(GROUPS, pairs):
        for i, j in ps:
            for k in (1, 2):
                for l in (1, 2):
                    resources.append(_res(pair(i, j, k, l), ZERO, lin(1)))

    players: dict[int, Player] = {}
    for g, ps in zip(GROUPS, pairs):
        for i in g:
            strategies = []
            for l in (1, 2):
                s = {personal(i, l)}
                for a, b in ps:
                    if i in (a, b):
                        s |= {pair(a, b, 1, l), pair(a, b, 2, l)}
                strategies.append(s)
            players[i] = Player.explicit(1, strategies)

    def side_strategies(k, side1, side2):
        # personal resources on side1 in group 1 and side2 in group 2; pair
        # resources stand for the opposite side in each group
        base = {personal(i, side1) for i in GROUPS[0]} | {personal(i, side2) for i in GROUPS[1]}
        out = []
        for a, b in pairs[0]:
            for c, d in pairs[1]:
                out.append(base | {pair(a, b, k, 3 - side1), pair(c, d, k, 3 - side2)})
        return out

    players[5] = Player.explicit(0, side_strategies(1, 1, 1) + side_strategies(1, 2, 2))
    players[6] = Player.explicit(0, side_strategies(2, 1, 2) + side_strategies(2, 2, 1))
    return Game([players[i] for i in range(1, 11)], resources, name="thm7")


# -- reduction from Independent Set -----------------------------------------------

@dataclass(frozen=True)
class GraphInstance:
    vertices: tuple
    edges: tuple
    k: int

    @classmethod
    def from_edges(cls, edges: Sequence[tuple[Hashable, Hashable]], k: int,
                   vertices: Sequence | None = None) -> "GraphInstance":
        if vertices is None:
            vertices = []
            for e in edges:
                for v in e:
                    if v not in vertices:
                        vertices.append(v)
        return cls(tuple(vertices), tuple(tuple(e) for e in edges), int(k))

    def degree(self, v) -> int:
        return sum(v in e for e in self.edges)

    def problems(self) -> list[str]:
        out = []
        seen = set()
        for u, v in self.edges:
            if u == v:
                out.append(f"self-loop at {u}")
            key = frozenset((u, v))
            if key in seen:
                out.append(f"parallel edge {u}-{v}")
            seen.add(key)
            for w in (u, v):
                if w not in self.vertices:
                    out.append(f"edge endpoint {w} is not a vertex")
        if self.k < 0:
            out.append("k must be non-negative")
        degrees = [self.degree(v) for v in self.vertices]
        if not degrees or max(degrees) < 2:
            out.append("maximum degree must be at least 2")
        for v, d in zip(self.vertices, degrees):
            if d == 0:
                out.append(f"vertex {v} is isolated")
        return out


def edge_resource(u, v) -> str:
    return f"e{u}-{v}"


def build_is_reduction(g: GraphInstance) -> Game:
    """Matroid game (alpha = 1/2) with a PNE iff ``g`` has an independent set of size ``k``.

    Players are the vertices (in order), then the connection player, then
    the two players of :func:`build_thm2` (whose ``r7`` bottleneck is 80x).
    """
    problems = g.problems()
    if problems:
        raise GameError("invalid graph instance: " + "; ".join(problems))
    n = len(g.vertices)
    resources = [_res(edge_resource(u, v), lin(1000), ZERO) for u, v in g.edges]
    players = []
    for i, v in enumerate(g.vertices, 1):
        d = g.degree(v)
        alt = [f"q{i}_{j}" for j in range(1, d)]
        for q in alt:
            resources.append(_res(q, ZERO, CostFunction.constant(1000 * d + 1)))
        ground = [edge_resource(a, b) for a, b in g.edges if v in (a, b)] + alt + ["rc"]
        players.append(Player.on_matroid(HALF, MatroidHandle.uniform(ground, d)))
    threshold = n - g.k + 1
    load = n + 1
    resources.append(_res("rc", ZERO,
                          CostFunction.table([0 if x <= threshold else 1000 for x in range(1, load + 1)])))
    resources += _thm2_resources(80)
    players.append(Player.explicit(HALF, [{"rc"}, {"r7"}]))
    players += _thm2_players()
    return Game(players, resources, name=f"is-reduction(k={g.k})")


def max_independent_set(g: GraphInstance) -> int:
    """Brute-force independence number."""
    adj = {frozenset(e) for e in g.edges}
    for size in range(len(g.vertices), 0, -1):
        for cand in itertools.combinations(g.vertices, size):
            if all(frozenset(p) not in adj for p in itertools.combinations(cand, 2)):
                return size
    return 0


GADGETS = {
    "thm2": build_thm2,
    "thm2-restricted": build_thm2_restricted,
    "thm4a": build_thm4a,
    "thm4b": build_thm4b,
    "thm5": build_thm5,
    "thm7": build_thm7,
}
