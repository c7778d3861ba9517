"""Encoding Independent Set as an equilibrium-existence question.

For each small graph and target size k, the reduction game should have a
pure equilibrium exactly when the graph has an independent set of size k.
The script prints both sides; rows marked MISMATCH are instances where the
construction, taken literally, disagrees with the brute-force answer.
"""

from __future__ import annotations

from mixedcongestion.equilibrium import has_pne
from mixedcongestion.gadgets import GraphInstance, build_is_reduction, max_independent_set

GRAPHS = {
    "triangle": [("a", "b"), ("b", "c"), ("c", "a")],
    "path": [("a", "b"), ("b", "c")],
}


def main() -> None:
    for name, edges in GRAPHS.items():
        for k in (1, 2, 3):
            graph = GraphInstance.from_edges(edges, k)
            game = build_is_reduction(graph)
            expected = max_independent_set(graph) >= k
            found = has_pne(game)
            flag = "" if found == expected else "  MISMATCH"
            print(f"{name:8s} k={k} players={game.n} states={game.state_count():6d} "
                  f"independent set={expected!s:5s} equilibrium={found!s:5s}{flag}")


if __name__ == "__main__":
    main()
