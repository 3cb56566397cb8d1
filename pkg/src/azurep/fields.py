"""Exact base fields: the rationals and prime fields.

Elements are plain Python numbers. ``Fraction`` for QQ and ``int`` in
``range(p)`` for GF(p). Arithmetic is done with ordinary operators on these
raw values and normalised by calling the field (``F(x)``) once at the end of
an accumulation, which keeps inner loops cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from sympy import isprime

from .errors import InputError

Scalar = Union[int, Fraction]


class ExactField:
    characteristic: int = 0

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, x) -> Scalar:
        raise NotImplementedError

    def inv(self, x) -> Scalar:
        raise NotImplementedError

    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def order(self) -> int | None:
        return None

    def to_json(self):
        raise NotImplementedError

    def format(self, x):
        """JSON-friendly form of an element."""
        raise NotImplementedError


@dataclass(frozen=True)
class Rationals(ExactField):
    characteristic = 0

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, bool):
            raise InputError("booleans are not field elements")
        if isinstance(x, float):
            raise InputError("floating point input is not exact; pass a string like '1/3'")
        try:
            return Fraction(x)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational number: {x!r}") from exc

    def inv(self, x) -> Fraction:
        x = self(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x

    def to_json(self):
        return "Q"

    def format(self, x):
        x = self(x)
        return int(x) if x.denominator == 1 else str(x)

    def __str__(self):
        return "QQ"


@dataclass(frozen=True)
class PrimeField(ExactField):
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 2 or not isprime(self.p):
            raise InputError(f"field characteristic must be prime, got {self.p!r}")

    @property
    def characteristic(self) -> int:  # type: ignore[override]
        return self.p

    @property
    def order(self) -> int:
        return self.p

    def __call__(self, x) -> int:
        if isinstance(x, int) and not isinstance(x, bool):
            return x % self.p
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise InputError(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(den, -1, self.p) % self.p
        if isinstance(x, str):
            return self(QQ(x))
        try:
            return int(x) % self.p
        except (TypeError, ValueError) as exc:
            raise InputError(f"not an element of GF({self.p}): {x!r}") from exc

    def inv(self, x) -> int:
        x = self(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def to_json(self):
        return {"p": self.p}

    def format(self, x):
        return self(x)

    def __str__(self):
        return f"GF({self.p})"


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_json(obj) -> ExactField:
    """Parse ``"Q"`` or ``{"p": 5}`` (also accepts a bare prime)."""
    if obj in ("Q", "QQ", None):
        return QQ
    if isinstance(obj, dict) and "p" in obj:
        return GF(int(obj["p"]))
    if isinstance(obj, int) and not isinstance(obj, bool):
        return GF(obj)
    raise InputError(f"unrecognised field {obj!r}")
