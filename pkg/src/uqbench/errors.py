"""Error taxonomy shared across the package.

ConfigError: malformed inputs, presets, or parameters (CLI exit code 2).
CapError:    a computation stepped outside its truncation window or degree
             cap; raised eagerly, results are never silently truncated
             (CLI exit code 3).
Mathematical check failures are ordinary return values (False / reports),
not exceptions; the CLI maps them to exit code 1.
"""


class ConfigError(ValueError):
    """Malformed root datum, preset, parameter set, or request."""


class CapError(RuntimeError):
    """A degree cap or truncation window was exceeded."""
