"""Seeded random instances for property tests and experiments."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from mixedcongestion.game import CostFunction, Game, Player, Resource
from mixedcongestion.matroid import MatroidHandle

ALPHA_CHOICES = (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(3, 4))


def random_table(rng: random.Random, length: int, step: int = 4, start: int = 5) -> list[Fraction]:
    """Non-decreasing, non-negative table; denominators up to 2."""
    v = Fraction(rng.randint(0, start * 2), rng.choice((1, 2)))
    out = []
    for _ in range(length):
        out.append(v)
        v += Fraction(rng.randint(0, step * 2), rng.choice((1, 2)))
    return out


def random_matroid(rng: random.Random, ground: Sequence[str], kind: Optional[str] = None) -> MatroidHandle:
    ground = list(ground)
    kind = kind or rng.choice(("uniform", "partition", "graphic"))
    if kind == "uniform":
        return MatroidHandle.uniform(ground, rng.randint(1, len(ground)))
    if kind == "partition":
        rng.shuffle(ground)
        cuts = sorted(rng.sample(range(1, len(ground)), rng.randint(0, min(2, len(ground) - 1))))
        blocks = [ground[a:b] for a, b in zip([0] + cuts, cuts + [len(ground)])]
        return MatroidHandle.partition(blocks, [rng.randint(1, len(b)) for b in blocks])
    # connected multigraph: a random tree on some vertices, remaining edges anywhere
    nv = rng.randint(2, max(2, min(len(ground), 5)))
    edges = []
    for k, lbl in enumerate(ground):
        if k < nv - 1:
            edges.append((rng.randrange(k + 1), k + 1, lbl))
        else:
            u, v = rng.randrange(nv), rng.randrange(nv)
            edges.append((u, v, lbl))
    return MatroidHandle.graphic(edges)


def _resources(rng, m, n, *, monotone=False, same=False, linear=False):
    names = [f"r{k}" for k in range(1, m + 1)]
    lat_tables = {}
    for rid in names:
        if linear:
            lat_tables[rid] = CostFunction.linear(rng.randint(0, 6), rng.randint(0, 6))
        else:
            lat_tables[rid] = CostFunction.table(random_table(rng, n))
    if monotone:
        # one random non-decreasing map f shared by all resources: e = f(l)
        values = sorted({fn(x) for fn in lat_tables.values() for x in range(1, n + 1)})
        f, acc = {}, Fraction(rng.randint(0, 5))
        for v in values:
            f[v] = acc
            acc += rng.choice((0, 0, 1, 2, 7))
        out = [Resource(rid, lat_tables[rid],
                        CostFunction.table([f[lat_tables[rid](x)] for x in range(1, n + 1)]))
               for rid in names]
        return names, out
    out = []
    for rid in names:
        lat = lat_tables[rid]
        if same:
            bot = lat
        elif linear:
            bot = CostFunction.linear(rng.randint(0, 6), rng.randint(0, 6))
        else:
            bot = CostFunction.table(random_table(rng, n))
        out.append(Resource(rid, lat, bot))
    return names, out


def _alphas(rng, n, mode):
    if mode == "pure":
        return [Fraction(rng.randint(0, 1)) for _ in range(n)]
    if mode == "uniform":
        a = rng.choice(ALPHA_CHOICES)
        return [a] * n
    return [rng.choice(ALPHA_CHOICES) for _ in range(n)]


def random_singleton_game(rng: random.Random, n: int, m: int, alphas: str = "any") -> Game:
    names, resources = _resources(rng, m, n)
    players = []
    for a in _alphas(rng, n, alphas):
        k = rng.randint(1, m)
        players.append(Player.explicit(a, [{r} for r in sorted(rng.sample(names, k))]))
    return Game(players, resources, name="random-singleton")


def random_matroid_game(rng: random.Random, n: int, m: int, alphas: str = "any",
                        monotone: bool = False, same: bool = False,
                        kind: Optional[str] = None) -> Game:
    """Each player gets a random matroid on a random subset of the resources."""
    names, resources = _resources(rng, m, n, monotone=monotone, same=same)
    players = []
    for a in _alphas(rng, n, alphas):
        size = rng.randint(1, m)
        ground = rng.sample(names, size)
        players.append(Player.on_matroid(a, random_matroid(rng, ground, kind)))
    return Game(players, resources, name="random-matroid")


def random_explicit_game(rng: random.Random, n: int, m: int, alphas: str = "any",
                         same: bool = False, max_strategies: int = 4,
                         max_size: int = 3) -> Game:
    """Arbitrary (usually non-matroid) strategy lists."""
    names, resources = _resources(rng, m, n, same=same)
    players = []
    for a in _alphas(rng, n, alphas):
        strategies = set()
        target = rng.randint(1, max_strategies)
        for _ in range(target * 4):
            size = rng.randint(1, min(max_size, m))
            strategies.add(frozenset(rng.sample(names, size)))
            if len(strategies) == target:
                break
        players.append(Player.explicit(a, sorted(strategies, key=sorted)))
    return Game(players, resources, name="random-explicit")
