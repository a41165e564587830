"""Q/Z helpers: canonical representatives in [0, 1) and the "num/den" text form."""

from fractions import Fraction

from heegaard.errors import InputParseError


def mod1(x: Fraction | int) -> Fraction:
    x = Fraction(x)
    return Fraction(x.numerator % x.denominator, x.denominator)


def is_integral(x: Fraction | int) -> bool:
    return Fraction(x).denominator == 1


def parse_rational(value: str | int | Fraction) -> Fraction:
    """Parse "num/den", an integer, or an integer string."""
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Fraction(value)
    if not isinstance(value, str):
        raise InputParseError(f"expected a rational like '2/5', got {value!r}")
    text = value.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise InputParseError(f"cannot parse rational {value!r}")


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
