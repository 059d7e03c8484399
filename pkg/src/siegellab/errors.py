"""Error classes shared across the package.

Each class maps to a distinct process exit code in the CLI (see cli.EXIT_CODES).
"""


class SiegelLabError(Exception):
    """Base class for package-specific failures."""


class ConfigError(SiegelLabError):
    """Malformed config file, bad flag combination, or missing required option."""


class CapacityError(SiegelLabError):
    """A requested table or scan exceeds the configured size budget."""


class NonConvergenceError(SiegelLabError):
    """An iterative evaluation cannot reach the requested error target within budget."""
