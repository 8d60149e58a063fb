"""Exception types shared across the package."""


class CmsError(Exception):
    """Base class for all cmsvote errors."""


class BudgetExceeded(CmsError):
    """The outcome space is larger than the enumeration budget."""


class NotGroupDichotomous(CmsError):
    """A solver requiring group-dichotomous binary ballots was given something else.

    Carries a witness describing the first offending statement (or issue).
    """

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"not group-dichotomous: {witness}")


class DeltaTooLarge(CmsError):
    """A solver requiring premise scopes of size at most one saw a larger scope."""


class InvalidDecomposition(CmsError):
    """A supplied tree decomposition violates one of the decomposition conditions."""


class InternalMismatch(CmsError):
    """A solver's claimed cost disagrees with the recomputed dissatisfaction.

    This signals a bug in a reduction or kernel and must abort the run.
    """


class Intractable(CmsError):
    """No solver route applies to some component of the instance."""

    def __init__(self, report):
        self.report = report
        super().__init__("instance classified as intractable")


class ParseError(CmsError):
    """Input document rejected; carries the offending line number."""

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")
