"""Annotated field types shared by the pydantic report models."""
from fractions import Fraction
from typing import Annotated, Any

from pydantic import PlainSerializer, PlainValidator, WithJsonSchema


def to_fraction(value: Any) -> Fraction:
    """Accept Fraction, int or "p/q" / "p" strings; floats are refused to keep data exact."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational literal: {value!r}") from e
    raise ValueError(f"expected a rational, got {type(value).__name__}")


def fraction_str(value: Fraction) -> str:
    return str(value) if value.denominator != 1 else f"{value.numerator}"


def to_turns(value: Any) -> Fraction:
    return to_fraction(value) % 1


def to_complex(value: Any) -> complex:
    if isinstance(value, complex):
        return value
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ValueError("expected a complex number or an [re, im] pair")


Rational = Annotated[
    Fraction,
    PlainValidator(to_fraction),
    PlainSerializer(fraction_str, return_type=str, when_used="json"),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]

# Phase in turns, reduced into [0, 1) on the way in.
Turns = Annotated[
    Fraction,
    PlainValidator(to_turns),
    PlainSerializer(fraction_str, return_type=str, when_used="json"),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]

ComplexPair = Annotated[
    complex,
    PlainValidator(to_complex),
    PlainSerializer(lambda z: [z.real, z.imag], return_type=list, when_used="json"),
    WithJsonSchema({"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}),
]
