"""JSON game documents, state CSV strings and edge-list graphs.

Document layout::

    {
      "resources": {"r1": {"latency": {"kind": "linear", "a": "2", "b": "0"},
                           "bottleneck": {"kind": "table", "values": ["1", "4"]}}},
      "players": [{"alpha": "1/2", "strategies": [["r1"], ["r2", "r3"]]},
                  {"alpha": "1", "matroid": {"kind": "uniform", "ground": [...], "rank": 2}}]
    }

Numbers are written as exact ``"p/q"`` strings; decimals and integers are
accepted on input.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from mixedcongestion.errors import GameError
from mixedcongestion.game import CostFunction, Game, Player, Resource, State, as_fraction
from mixedcongestion.gadgets import GraphInstance
from mixedcongestion.matroid import MatroidHandle


def _num(x: Fraction) -> str:
    return str(x)


def _cost_to_dict(fn: CostFunction) -> dict:
    if fn.kind == "linear":
        return {"kind": "linear", "a": _num(fn.a), "b": _num(fn.b)}
    return {"kind": "table", "values": [_num(v) for v in fn.values]}


def _cost_from_dict(d: Any, where: str) -> CostFunction:
    if not isinstance(d, dict) or "kind" not in d:
        raise GameError(f"{where}: cost function needs a 'kind'")
    if d["kind"] == "linear":
        return CostFunction.linear(d.get("a", 0), d.get("b", 0))
    if d["kind"] == "table":
        return CostFunction.table(d["values"])
    raise GameError(f"{where}: unknown cost function kind {d['kind']!r}")


def _matroid_to_dict(m: MatroidHandle) -> dict:
    if m.kind == "uniform":
        return {"kind": "uniform", "ground": list(m.ground), "rank": m.k}
    if m.kind == "partition":
        return {"kind": "partition", "blocks": [list(b) for b in m.blocks], "ranks": list(m.ranks)}
    if m.kind == "graphic":
        return {"kind": "graphic", "edges": [[u, v, lbl] for u, v, lbl in m.edges]}
    return {"kind": "explicit_bases", "ground": list(m.ground),
            "bases": [m.sorted_elements(b) for b in m.bases]}


def _matroid_from_dict(d: dict, where: str) -> MatroidHandle:
    kind = d.get("kind")
    if kind == "uniform":
        return MatroidHandle.uniform(d["ground"], d["rank"])
    if kind == "partition":
        return MatroidHandle.partition(d["blocks"], d["ranks"])
    if kind == "graphic":
        return MatroidHandle.graphic([tuple(e) for e in d["edges"]])
    if kind == "explicit_bases":
        return MatroidHandle.explicit(d["bases"], d.get("ground"))
    raise GameError(f"{where}: unknown matroid kind {kind!r}")


def game_to_dict(game: Game) -> dict:
    players = []
    for p in game.players:
        entry: dict[str, Any] = {"alpha": _num(p.alpha)}
        if p.is_matroid_space:
            entry["matroid"] = _matroid_to_dict(p.space)
        else:
            entry["strategies"] = [game.ordered(s) for s in p.space]
        players.append(entry)
    resources = {r.id: {"latency": _cost_to_dict(r.latency),
                        "bottleneck": _cost_to_dict(r.bottleneck)} for r in game.resources}
    out: dict[str, Any] = {}
    if game.name:
        out["name"] = game.name
    out["resources"] = resources
    out["players"] = players
    return out


def game_from_dict(doc: dict) -> Game:
    if not isinstance(doc, dict) or "players" not in doc or "resources" not in doc:
        raise GameError("document needs top-level 'players' and 'resources'")
    resources = []
    for rid, spec in doc["resources"].items():
        where = f"resource {rid}"
        resources.append(Resource(rid, _cost_from_dict(spec.get("latency"), where),
                                  _cost_from_dict(spec.get("bottleneck"), where)))
    players = []
    for k, spec in enumerate(doc["players"], 1):
        where = f"player {k}"
        alpha = as_fraction(spec["alpha"])
        if "matroid" in spec:
            players.append(Player.on_matroid(alpha, _matroid_from_dict(spec["matroid"], where)))
            continue
        strategies = spec.get("strategies")
        if strategies is None:
            raise GameError(f"{where}: needs 'strategies' or 'matroid'")
        for s in strategies:
            if len(set(s)) != len(s):
                raise GameError(f"{where}: strategy {s} lists a resource twice")
        players.append(Player.explicit(alpha, strategies))
    return Game(players, resources, name=doc.get("name", ""))


def dumps(game: Game) -> str:
    return json.dumps(game_to_dict(game), indent=2) + "\n"


def loads(text: str) -> Game:
    return game_from_dict(json.loads(text))


def save(game: Game, path) -> None:
    Path(path).write_text(dumps(game))


def load(path) -> Game:
    return loads(Path(path).read_text())


# -- states -----------------------------------------------------------------------

def format_state_csv(game: Game, state: State) -> str:
    """Explicit players by strategy index, matroid players by ``a+b``."""
    parts = []
    for i, s in enumerate(state):
        if game.players[i].is_matroid_space:
            parts.append(game.format_strategy(s))
        else:
            parts.append(str(game.strategies(i).index(s)))
    return ",".join(parts)


def parse_state_csv(game: Game, text: str) -> State:
    """Inverse of :func:`format_state_csv`.

    Bare integers index explicit strategy lists; anything else is read as a
    ``+``-separated resource set (also accepted for explicit players).
    """
    choices: list = []
    for tok in text.split(","):
        tok = tok.strip().strip('"').strip("“”")
        if tok.isdigit():
            choices.append(int(tok))
        else:
            choices.append(frozenset(t for t in tok.split("+") if t))
    return game.make_state(choices)


def read_edge_list(path, k: int) -> GraphInstance:
    """One ``u v`` pair per line; blank lines and ``#`` comments are skipped."""
    edges = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GameError(f"bad edge line {line!r}")
        edges.append((parts[0], parts[1]))
    return GraphInstance.from_edges(edges, k)
