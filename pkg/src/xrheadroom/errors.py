"""Exception hierarchy shared by all xrheadroom modules."""


class XrHeadroomError(Exception):
    """Base class for every error raised by this package."""


class ProfileSyntaxError(XrHeadroomError, ValueError):
    """A profile or scenario document is not well-formed JSON or has the wrong shape."""


class ValidationError(XrHeadroomError, ValueError):
    """A field violates a type invariant.

    ``field`` is a dotted path to the offending value, ``invariant`` the rule
    that failed.
    """

    def __init__(self, field: str, invariant: str):
        self.field = field
        self.invariant = invariant
        super().__init__(f"{field}: violates {invariant}")


class DuplicateNameError(XrHeadroomError, ValueError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"duplicate profile name {name!r} (set \"override\": true to replace)")


class MissingBenchmarkError(XrHeadroomError, LookupError):
    def __init__(self, kind, soc: str):
        self.kind = kind
        self.soc = soc
        super().__init__(f"{soc} has no value for {getattr(kind, 'value', kind)}")


class UnknownSocError(XrHeadroomError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(name)

    def __str__(self) -> str:
        return f"unknown SoC {self.name!r}"


class ConflictingOverheadModelError(XrHeadroomError, ValueError):
    """Raised when MR capacity multipliers are requested for a scenario that
    already carries an Overhead stage (the two would double count)."""


class UnsupportedFormatError(XrHeadroomError, ValueError):
    pass
