"""Small games in which no pure equilibrium exists.

The first is a two-player game on uniform matroids where both players weigh
latency and bottleneck equally. Restricted to two strategies each it runs
through four states and returns to the start. Exhaustive enumeration then
confirms that the full strategy spaces (and two non-matroid games with
identical latency and bottleneck costs) have no equilibrium either.
"""

from __future__ import annotations

from mixedcongestion import gadgets
from mixedcongestion.dynamics import run_dynamics
from mixedcongestion.equilibrium import beta_sweep, enumerate_pne
from mixedcongestion.game import all_costs


def main() -> None:
    core = gadgets.build_thm2_restricted()
    trace = run_dynamics(core, core.first_state())
    print("two-strategy core, best responses:")
    for state in trace.states:
        print(f"  {core.format_state(state):28s} costs {tuple(int(c) for c in all_costs(core, state))}")
    print(f"  verdict: {trace.verdict} of length {trace.cycle_length}\n")

    for name in ("thm2", "thm4a", "thm4b"):
        game = gadgets.GADGETS[name]()
        sweep = beta_sweep(game)
        print(f"{name:6s} states={game.state_count():4d} equilibria={len(enumerate_pne(game))} "
              f"best achievable factor={sweep.min_beta}")


if __name__ == "__main__":
    main()
