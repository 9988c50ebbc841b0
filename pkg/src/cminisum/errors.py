"""Exception hierarchy shared by the solvers and the CLI.

The CLI maps these onto exit codes: format errors -> 1, unsupported
profiles -> 2, size caps -> 3.
"""


class CmsError(Exception):
    """Base class for all library errors."""


class ProfileFormatError(CmsError):
    """Malformed profile or outcome input (syntax or schema).

    ``path`` is a JSON-path-like locator ("voters[2].ballots[0].depends_on[1]")
    when the error was found while walking a document.
    """

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class MalformedOutcomeError(ProfileFormatError):
    """An outcome does not assign a value to every issue it must cover."""


class UnsupportedProfileError(CmsError):
    """The requested method cannot handle this profile (e.g. in-degree or
    treewidth restrictions are violated)."""


class SizeCapError(CmsError):
    """An explicit size cap (brute-force limit, in-degree cap, exact
    MIN SAT variable limit) would be exceeded."""
