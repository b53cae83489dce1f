"""Exception hierarchy shared across the package."""


class GameError(Exception):
    """Base class for all errors raised by this package."""


class MalformedTreeError(GameError):
    """Tree violates a structural invariant (arity, fanout, duplicate ids)."""


class ContractNodePresentError(GameError):
    """Operation requires a fully expanded tree but found a contract node."""


class PlayerMismatchError(GameError):
    """Two games passed to a comparison do not share a player list."""


class IncompleteCutError(GameError):
    """A cut is missing a choice for a decision node owned by its player."""


class UnknownNodeError(GameError):
    """A cut or profile references a node id (or child) that does not exist."""


class IncompleteProfileError(GameError):
    """A strategy profile does not cover every decision node."""


class BudgetExceededError(GameError):
    """Predicted expansion size is above the configured node budget."""

    def __init__(self, message, predicted=None, max_nodes=None):
        super().__init__(message)
        self.predicted = predicted
        self.max_nodes = max_nodes


class DuplicatePlayerInOrderError(GameError):
    """A contract order lists the same player twice."""


class NotTwoPlayerError(GameError):
    """The inducible-region algorithm only handles two-player games."""


class NotBifurcatingError(GameError):
    """The inducible-region algorithm requires binary decision nodes."""


class InvalidParamsError(GameError):
    """Commerce contract parameters violate their validity constraints."""


class ParseError(GameError):
    """Syntax error in the game DSL, with source position."""

    def __init__(self, message, line, column):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class ArityError(ParseError):
    """A leaf's payoff count does not match the declared player count."""


class UnknownPlayerError(ParseError):
    """A node names a player that was not declared in the header."""


class DuplicatePlayerError(ParseError):
    """The header declares the same player name twice."""
