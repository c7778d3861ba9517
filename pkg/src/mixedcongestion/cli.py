"""Command-line interface.

Exit codes:

* ``validate``: 0 valid, 1 violations
* ``solve``: 0 PNE found, 2 no PNE (proven by enumeration), 3 inconclusive
* ``dynamics``: 0 converged, 4 cycle, 5 step cap
* ``certify``: 0 pass, 1 fail
* ``approx``: 0
* any command: 64 for unreadable or malformed input
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import warnings
from fractions import Fraction
from typing import Optional, Sequence

from mixedcongestion import dynamics, equilibrium, gadgets, io
from mixedcongestion.errors import (
    CapExceededError, GameError, InapplicableError, IntractableError, SolverError,
)
from mixedcongestion.game import Game, validate

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_NO_PNE = 2
EXIT_INCONCLUSIVE = 3
EXIT_CYCLE = 4
EXIT_CAP = 5
EXIT_USAGE = 64

SOLVERS = {
    "singleton": equilibrium.solve_singleton,
    "pure-pref": equilibrium.solve_pure_preferences,
    "monotone": equilibrium.solve_monotone_dependence,
}
RULES = {"better": "better_response", "best": "best_response", "lazy": "lazy_best_response"}
SCHEDULERS = {"rr": "round_robin", "random": "random", "maxgain": "max_gain"}


def _load(path: str) -> Game:
    try:
        return io.load(path)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise GameError(f"cannot read {path}: {exc}") from None


def _print_state(game: Game, state) -> None:
    print(f"state={io.format_state_csv(game, state)}")


def random_state(game: Game, rng: random.Random):
    return tuple(rng.choice(game.strategies(i)) for i in range(game.n))


# -- commands -------------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        game = _load(args.file)
    except GameError as exc:
        print(exc)
        return EXIT_FAIL
    problems = validate(game)
    for p in problems:
        print(p)
    if not problems:
        print(f"ok: {game.n} players, {game.m} resources")
    return EXIT_FAIL if problems else EXIT_OK


def _auto_solver(game: Game):
    if game.is_singleton:
        return "singleton"
    if game.is_matroid and game.has_pure_preferences:
        return "pure-pref"
    if game.is_matroid and game.has_monotone_dependence:
        return "monotone"
    return "enumerate"


def cmd_solve(args) -> int:
    game = _load(args.file)
    method = _auto_solver(game) if args.method == "auto" else args.method
    print(f"method={method}")
    try:
        if method == "enumerate":
            found = equilibrium.enumerate_pne(game, cap=args.cap)
            if not found:
                print("no pure Nash equilibrium")
                return EXIT_NO_PNE
            state = found[0]
        else:
            state = SOLVERS[method](game)
        cert = equilibrium.certify(game, state)
    except (CapExceededError, IntractableError) as exc:
        print(f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE
    except InapplicableError as exc:
        print(f"inapplicable: {exc}")
        return EXIT_INCONCLUSIVE
    _print_state(game, state)
    print(equilibrium.format_certificate(game, cert))
    return EXIT_OK


def cmd_dynamics(args) -> int:
    game = _load(args.file)
    if args.start == "random":
        start = random_state(game, random.Random(args.seed))
    else:
        start = io.parse_state_csv(game, args.start)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        trace = dynamics.run_dynamics(
            game, start, RULES[args.rule] if args.rule else None,
            SCHEDULERS[args.sched], seed=args.seed, max_steps=args.max_steps)
    sys.stdout.write(dynamics.format_trace(game, trace))
    return {"converged": EXIT_OK, "cycle": EXIT_CYCLE}.get(trace.verdict, EXIT_CAP)


def cmd_certify(args) -> int:
    game = _load(args.file)
    state = io.parse_state_csv(game, args.state)
    cert = equilibrium.certify(game, state, Fraction(args.beta))
    print(equilibrium.format_certificate(game, cert))
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_approx(args) -> int:
    game = _load(args.file)
    start = io.parse_state_csv(game, args.start) if args.start else None
    cert = equilibrium.approx_solve(game, args.potential, start=start)
    beta, squared = equilibrium.approx_threshold(game, args.potential)
    target = f"sqrt({beta})" if squared else str(beta)
    _print_state(game, cert.state)
    print(equilibrium.format_certificate(game, cert))
    print(f"target={target} steps={cert.steps if cert.steps is not None else 0}")
    return EXIT_OK


def cmd_gadget(args) -> int:
    if args.name == "is-reduction":
        if args.graph is None or args.k is None:
            print("is-reduction needs --graph and -k")
            return EXIT_USAGE
        game = gadgets.build_is_reduction(io.read_edge_list(args.graph, args.k))
    else:
        game = gadgets.GADGETS[args.name]()
    text = io.dumps(game)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        print(f"wrote {args.output}: {game.n} players, {game.m} resources")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixedcongestion",
        description="Congestion games with mixed latency/bottleneck objectives.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a game file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="find a pure Nash equilibrium")
    p.add_argument("file")
    p.add_argument("--method", default="auto",
                   choices=["auto", "enumerate", *SOLVERS])
    p.add_argument("--cap", type=int, default=equilibrium.PNE_CAP,
                   help="state-count cap for enumeration")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("dynamics", help="simulate improvement dynamics")
    p.add_argument("file")
    p.add_argument("--start", default="random", help="CSV state or 'random'")
    p.add_argument("--rule", choices=list(RULES), default=None,
                   help="default: lazy if some alpha is 0, else best")
    p.add_argument("--sched", choices=list(SCHEDULERS), default="rr")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=10_000)
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("certify", help="approximation factor of a state")
    p.add_argument("file")
    p.add_argument("--state", required=True)
    p.add_argument("--beta", default="1")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("approx", help="compute an approximate equilibrium")
    p.add_argument("file")
    p.add_argument("--potential", required=True, choices=["mixed", "square", "sum", "matroid"])
    p.add_argument("--start", default=None, help="CSV start state (default: first state)")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("gadget", help="write a built-in construction")
    p.add_argument("name", choices=[*gadgets.GADGETS, "is-reduction"])
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--graph", default=None, help="edge-list file (is-reduction)")
    p.add_argument("-k", type=int, default=None, help="independent set size (is-reduction)")
    p.set_defaults(func=cmd_gadget)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GameError, InapplicableError, SolverError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
