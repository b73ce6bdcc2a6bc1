# evit/errors.py

"""
Exception hierarchy shared by every layer.

Each error carries the process exit code the CLI reports for it:
- 2: configuration / validation problems (bad input, missing stage outputs)
- 3: violated preconditions (e.g. fewer than two source domains)
- 4: numerical failures (indefinite matrices, singular systems, failed fits)
"""


class EvitError(Exception):
    exit_code: int = 1


class ConfigError(EvitError, ValueError):
    exit_code = 2


class ValidationError(EvitError, ValueError):
    exit_code = 2


class PreconditionError(EvitError):
    exit_code = 3


class NumericalError(EvitError, ArithmeticError):
    exit_code = 4


class FittingError(NumericalError):
    pass


def require_multiple_sources(n_sources: int) -> None:
    """Raise when the source population is too small to learn from."""
    if n_sources < 2:
        raise PreconditionError(
            f"N_s={n_sources}: at least 2 source domains are required "
            "(N_s > 1) to generate pseudo-target training data"
        )


def invalid_config(what: str, exc: Exception) -> ConfigError:
    """ConfigError for a raw coercion failure (bad type, bad literal, missing key)."""
    if isinstance(exc, KeyError):
        return ConfigError(f"{what}: missing field {exc}")
    return ConfigError(f"{what}: {exc}")


__all__ = [
    "EvitError",
    "ConfigError",
    "ValidationError",
    "PreconditionError",
    "NumericalError",
    "FittingError",
    "require_multiple_sources",
    "invalid_config",
]
