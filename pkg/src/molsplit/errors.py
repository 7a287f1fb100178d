"""Exception hierarchy shared by the library and the CLI exit-code mapping."""

from __future__ import annotations


class MolsplitError(Exception):
    """Base class for every error raised on purpose by molsplit."""


class InputError(MolsplitError, ValueError):
    """Bad input: unreadable rows, invalid parameters, malformed files.

    ``line`` is the 1-based line number in the offending file when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SmilesSyntaxError(InputError):
    """SMILES text that does not parse; ``offset`` is the 0-based character index."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}" + (f" in {text!r}" if text else ""))


class UnsupportedSmilesError(InputError):
    """Valid SMILES using a feature outside the supported subset."""

    def __init__(self, feature: str, offset: int, text: str = ""):
        self.feature = feature
        self.offset = offset
        super().__init__(
            f"unsupported SMILES feature '{feature}' at offset {offset}"
            + (f" in {text!r}" if text else "")
        )


class MetricError(InputError):
    """Metric requested on degenerate input (e.g. all labels identical)."""


class InfeasibleError(MolsplitError):
    """No assignment satisfies the partition bounds."""

    def __init__(self, message: str, hint: str = ""):
        self.hint = hint
        super().__init__(f"{message} {hint}".strip())


class TimeBudgetError(MolsplitError):
    """The solver ran out of time before finding any feasible assignment."""
