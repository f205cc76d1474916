"""Exception types shared by the mirs modules."""


class MirsError(Exception):
    """Base class for every error raised on purpose by mirs."""


class ValidationError(MirsError):
    """Input does not satisfy a schema, a precondition or a parameter constraint."""


class NonGenericParameters(MirsError):
    """Distinct linear forms evaluate to the same rational, or a genericity condition fails."""


class InternalInconsistency(MirsError):
    """A lemma-derived invariant was violated by a computed object."""
