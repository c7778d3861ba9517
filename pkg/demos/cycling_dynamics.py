"""Best-response dynamics can cycle even when equilibria exist.

Three players share three resources. Two of them only care about the sum of
latencies, the third only about the worst bottleneck. Round-robin best
responses from (r1, r1, r2) revisit their start after six moves, yet the
game has two pure equilibria, and a BFS over improvement paths finds one.
"""

from __future__ import annotations

from mixedcongestion import gadgets
from mixedcongestion.dynamics import format_trace, run_dynamics, weakly_acyclic_probe
from mixedcongestion.equilibrium import certify, enumerate_pne, format_certificate, solve_singleton
from mixedcongestion.game import all_costs


def main() -> None:
    game = gadgets.build_thm5()
    start = game.make_state([{"r1"}, {"r1"}, {"r2"}])

    trace = run_dynamics(game, start, scheduler="round_robin")
    print("round-robin dynamics:")
    print(format_trace(game, trace), end="")
    for state in trace.states:
        costs = ", ".join(str(c) for c in all_costs(game, state))
        print(f"  {game.format_state(state):16s} costs ({costs})")

    print("\nequilibria by enumeration:")
    for state in enumerate_pne(game):
        print(" ", game.format_state(state))

    probe = weakly_acyclic_probe(game, start)
    print("\nan improvement path that does reach one:")
    print("  " + " -> ".join(game.format_state(s) for s in probe.path))

    # insertion solver for singleton games, checked by the certificate
    state = solve_singleton(game)
    print("\nsingleton solver:", game.format_state(state))
    print(" ", format_certificate(game, certify(game, state)))


if __name__ == "__main__":
    main()
