"""Exception hierarchy shared by all modules."""


class GameError(ValueError):
    """Malformed game, strategy or state."""


class InvalidStateError(GameError):
    def __init__(self, player: int, message: str):
        super().__init__(f"player {player + 1}: {message}")
        self.player = player


class CostEvaluationError(GameError):
    """A cost function was evaluated outside its domain."""


class CapExceededError(RuntimeError):
    """An exhaustive routine was asked to enumerate more than its cap."""


class IntractableError(RuntimeError):
    """No exact best-response route applies to a player's strategy space."""

    def __init__(self, player: int, message: str = "intractable best response"):
        super().__init__(f"player {player + 1}: {message}")
        self.player = player


class InapplicableError(ValueError):
    """A solver's structural precondition does not hold for the game."""


class SolverError(RuntimeError):
    """A solver whose termination is guaranteed exceeded its iteration bound."""
