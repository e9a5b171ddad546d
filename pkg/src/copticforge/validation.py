"""Input-validation helpers shared by the estimator classes and the CLI."""

from __future__ import annotations

from collections.abc import Iterable


def check_probability(value, name: str) -> float:
    """Validate a probability in [0, 1] and return it as a float."""
    try:
        prob = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a number, got {value!r}") from None
    if not 0.0 <= prob <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {prob!r}")
    return prob


def check_seed(value, name: str = "seed") -> int:
    """Validate a 64-bit unsigned seed."""
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if not 0 <= value < 2**64:
        raise ValueError(f"{name} must fit in an unsigned 64-bit integer")
    return value


def check_text_list(X) -> list[str]:
    """Materialize an iterable of strings, rejecting anything else."""
    if isinstance(X, str):
        raise ValueError("expected an iterable of strings, got a single string")
    if not isinstance(X, Iterable):
        raise ValueError(f"expected an iterable of strings, got {type(X).__name__}")
    out = list(X)
    for item in out:
        if not isinstance(item, str):
            raise ValueError(
                f"expected an iterable of strings, found {type(item).__name__}"
            )
    return out


def check_pairs(X) -> list:
    """Materialize an iterable of AlignedPair objects."""
    from .align import AlignedPair

    if not isinstance(X, Iterable) or isinstance(X, (str, bytes)):
        raise ValueError(
            f"expected an iterable of AlignedPair, got {type(X).__name__}"
        )
    out = list(X)
    for item in out:
        if not isinstance(item, AlignedPair):
            raise ValueError(
                f"expected AlignedPair elements, found {type(item).__name__}"
            )
    return out
