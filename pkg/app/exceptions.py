"""Exception hierarchy; every class knows the CLI exit code it maps to."""


class ToolkitError(Exception):
    """Base class for all toolkit errors (internal error unless refined)."""

    exit_code = 5


class InputError(ToolkitError):
    """Malformed input: bad files, dimension mismatches, unknown names."""

    exit_code = 2


class ClosureError(InputError):
    """A span that was required to be closed under the bracket is not."""


class GradingError(ToolkitError):
    """A grading operation was requested on an invalid grading."""

    exit_code = 3


class ResourceLimitError(ToolkitError):
    """A configured safety cap was exceeded."""

    exit_code = 4


class CertificateError(ToolkitError):
    """A collision certificate failed replay or cannot be rendered."""

    exit_code = 5
