"""Thinging-machine modeling toolkit."""

try:
    from ._tmkit import (  # noqa: F401
        canonical,
        chronologies,
        precedence,
        simulate,
        to_dot,
        to_json,
        validate,
    )
except ImportError:  # in-tree builds place the extension on sys.path directly
    from _tmkit import (  # noqa: F401
        canonical,
        chronologies,
        precedence,
        simulate,
        to_dot,
        to_json,
        validate,
    )

__all__ = [
    "canonical",
    "chronologies",
    "precedence",
    "simulate",
    "to_dot",
    "to_json",
    "validate",
]
