"""
Exact points on the unit circle.

Every angle is a rational fraction of a full turn (pi radians is 1/2, pi/2 is
1/4). Clockwise is the direction of increasing turn parameter. Nothing in this
module rounds.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .exceptions import AngleFormatError

HALF_TURN = Fraction(1, 2)
QUARTER_TURN = Fraction(1, 4)

# Visibility sentinel: the whole circle, antipodal point included.
FULL_VISIBILITY = Fraction(1)

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def as_fraction(value) -> Fraction:
    """
    Coerce an exact value to a Fraction.

    Accepts Angle, Fraction, int, or "num/den" text. Floats are rejected
    because they cannot represent most rational angles exactly.

    Raises:
        TypeError: If value is a float or of an unsupported type.
        AngleFormatError: If value is text that is not "num/den".
    """
    if isinstance(value, Angle):
        return value.value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError("angles must be exact rationals, not floats")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def parse_fraction(text: str) -> Fraction:
    """Parse "num/den" (or a bare integer) into a Fraction."""
    match = _RATIONAL_RE.match(text)
    if not match:
        raise AngleFormatError(f"not a rational 'num/den': {text!r}")
    numerator, denominator = match.groups()
    if denominator is not None and int(denominator) == 0:
        raise AngleFormatError(f"zero denominator: {text!r}")
    return Fraction(int(numerator), int(denominator or 1))


def format_fraction(value: Fraction) -> str:
    """Render a Fraction as "num/den" in lowest terms ("0/1" for zero)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True)
class Angle:
    """
    A point on the circle, stored as a fraction of a turn in [0, 1).

    All constructors normalize modulo 1. Addition and subtraction with other
    angles or rationals return normalized angles; multiplication scales the
    turn parameter by a rational before normalizing.
    """

    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_fraction(self.value) % 1)

    @classmethod
    def parse(cls, text: str) -> "Angle":
        return cls(parse_fraction(text))

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def __add__(self, other) -> "Angle":
        return Angle(self.value + as_fraction(other))

    __radd__ = __add__

    def __sub__(self, other) -> "Angle":
        return Angle(self.value - as_fraction(other))

    def __rsub__(self, other) -> "Angle":
        return Angle(as_fraction(other) - self.value)

    def __mul__(self, factor) -> "Angle":
        return Angle(self.value * as_fraction(factor))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_fraction(self.value)

    def __repr__(self) -> str:
        return f"Angle({self})"


ZERO = Angle(0)


def cw(a: Angle, b: Angle) -> Angle:
    """Clockwise angle from a to b; cw(a, a) is 0."""
    return Angle(b.value - a.value)


def angular_distance(a: Angle, b: Angle) -> Angle:
    """Length of the shorter arc between a and b, in [0, 1/2]."""
    forward = cw(a, b).value
    return Angle(min(forward, 1 - forward))


def antipodal(a: Angle) -> Angle:
    return a + HALF_TURN


def rotate(a: Angle, by) -> Angle:
    return a + by


def validate_theta(theta, *, allow_full: bool = False) -> Fraction:
    """
    Check a visibility range and return it as a Fraction.

    Raises:
        AngleFormatError: If theta is not in (0, 1/2], or is not the
            full-visibility sentinel when that is allowed.
    """
    value = as_fraction(theta)
    if allow_full and value == FULL_VISIBILITY:
        return value
    if not 0 < value <= HALF_TURN:
        raise AngleFormatError(f"theta must satisfy 0 < theta <= 1/2, got {value}")
    return value


def in_theta_neighborhood(observer: Angle, p: Angle, theta) -> bool:
    """True iff p is strictly closer than theta to observer."""
    theta = validate_theta(theta)
    return angular_distance(observer, p).value < theta


def sees(observer: Angle, p: Angle, theta) -> bool:
    """Visibility test that also understands the full-visibility sentinel."""
    if as_fraction(theta) == FULL_VISIBILITY:
        return True
    return in_theta_neighborhood(observer, p, theta)


def offset_visible(offset, theta) -> bool:
    """True iff a clockwise offset from an observer lies within its view."""
    offset = as_fraction(offset) % 1
    theta = as_fraction(theta)
    if theta == FULL_VISIBILITY:
        return True
    return min(offset, 1 - offset) < theta


@dataclass(frozen=True)
class OpenArc:
    """The open arc of points closer than half_width to center."""

    center: Angle
    half_width: Fraction

    def __post_init__(self):
        width = as_fraction(self.half_width)
        if not 0 < width <= HALF_TURN:
            raise AngleFormatError("arc half width must satisfy 0 < w <= 1/2")
        object.__setattr__(self, "half_width", width)

    def contains(self, p: Angle) -> bool:
        return angular_distance(self.center, p).value < self.half_width

    __contains__ = contains


def neighborhood(center: Angle, alpha) -> OpenArc:
    return OpenArc(center, as_fraction(alpha))


def semicircle(center: Angle) -> OpenArc:
    """Open semicircle centered at center: distance strictly below 1/4 turn."""
    return OpenArc(center, QUARTER_TURN)


def regular_set(n: int) -> tuple[Angle, ...]:
    """The n points k/n, starting at angle 0."""
    if n < 1:
        raise ValueError("n must be positive")
    return tuple(Angle(Fraction(k, n)) for k in range(n))
