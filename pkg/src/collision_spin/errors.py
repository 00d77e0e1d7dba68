"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""

    def payload(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class CollisionError(DomainError):
    """A configuration with two bodies at (numerically) the same point."""

    def __init__(self, pair: tuple[int, int], separation: float, scale: float):
        self.pair = (int(pair[0]), int(pair[1]))
        self.separation = float(separation)
        self.scale = float(scale)
        super().__init__(
            f"bodies {self.pair[0]} and {self.pair[1]} collide "
            f"(separation {self.separation:.3e}, configuration scale {self.scale:.3e})"
        )

    def payload(self) -> dict:
        d = super().payload()
        d["pair"] = list(self.pair)
        d["separation"] = self.separation
        return d


class ChartDomainError(DomainError):
    """Configuration outside the shape chart (last coordinate vanishes)."""


class ConvergenceError(RuntimeError):
    """An iterative solve ran out of iterations; carries the residual trace."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []


class IntegrationError(RuntimeError):
    """The ODE solver failed (step-size underflow, non-finite state)."""
