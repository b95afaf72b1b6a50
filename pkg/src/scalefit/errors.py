from __future__ import annotations


class InputError(ValueError):
    """Bad input data. ``line`` is the 1-based source line (or record index) when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FitError(RuntimeError):
    """A fit could not be produced (too few points, degenerate optimum, no convergence)."""
