class ImpcompError(Exception):
    """Base class for every error raised by the package."""


class StructuralError(ImpcompError, ValueError):
    """Malformed input: unknown element ids, non-lattices, bad maps."""


class NotImplicative(ImpcompError):
    """A candidate implication table breaks variance or meet distribution."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class TermError(ImpcompError):
    """Unbound variable or unknown element while interpreting a term."""


class ParseError(ImpcompError):
    def __init__(self, message, line=None, column=None, source=None):
        where = ""
        if line is not None:
            where = f"{source + ':' if source else ''}{line}:{column}: "
        super().__init__(where + message)
        self.line = line
        self.column = column


class NotTracked(ImpcompError):
    """A construction needed a tracked morphism and got an untracked one."""


class Undecided(ImpcompError):
    """A search strategy could not reach a verdict; ``advice`` says what to try."""

    def __init__(self, message, advice=""):
        super().__init__(message)
        self.advice = advice
