"""Exception types shared across the package."""


class NonAddError(Exception):
    """Base class for all library errors."""


class NotInAlgebra(NonAddError):
    pass


class SpaceMismatch(NonAddError):
    pass


class EmptySet(NonAddError):
    pass


class Unsupported(NonAddError):
    """Operation has no decidable/closed-form evaluation for this input."""


class InvalidInterval(NonAddError, ValueError):
    pass


class InvalidSetFunction(NonAddError, ValueError):
    pass


class SeriesDiverges(NonAddError):
    """The singleton series of an integral is not absolutely convergent.

    ``partial_sums`` holds a few partial sums of the absolute series as a witness.
    """

    def __init__(self, message, partial_sums=()):
        super().__init__(message)
        self.partial_sums = tuple(partial_sums)


class ConjugateMismatch(NonAddError, ValueError):
    pass


class NotAnAtom(NonAddError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NoSinglePoint(NonAddError):
    pass


class HypothesisViolated(NonAddError):
    def __init__(self, name, witness=None):
        super().__init__(f"hypothesis {name!r} violated (witness: {witness!r})")
        self.name = name
        self.witness = witness


class UnboundedSup(NonAddError):
    pass
