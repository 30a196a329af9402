"""
Exceptions raised by the trade network toolkit.
"""

from typing import Optional


class TradeNetworkError(ValueError):
    """Base class for all data and analysis errors."""


class MalformedRow(TradeNetworkError):
    """A CSV row could not be turned into a valid record."""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        location = ""
        if source is not None:
            location += f"{source}:"
        if line is not None:
            location += f"line {line}: "
        elif location:
            location += " "
        super().__init__(f"{location}{message}")


class EmptyInput(TradeNetworkError):
    """No usable records remain after cleaning."""


class DuplicateCode(TradeNetworkError):
    """An economy code appears more than once in a group map."""


class UnknownNode(TradeNetworkError, KeyError):
    """The economy code is not a node of the network."""

    def __str__(self) -> str:
        # KeyError quotes its message; keep the plain ValueError rendering
        return str(self.args[0]) if self.args else ""


class UnknownEdge(TradeNetworkError, KeyError):
    """The directed relationship is not an edge of the network."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class DegenerateBaseline(TradeNetworkError):
    """Baseline efficiency is zero, so ratios against it are undefined."""


class IncompatibleStrategy(TradeNetworkError):
    """The attack strategy, removal kind and mode do not fit together."""


class ZeroVariance(TradeNetworkError):
    """A correlation input series is constant."""


class LengthMismatch(TradeNetworkError):
    """Correlation inputs differ in length or are too short."""
