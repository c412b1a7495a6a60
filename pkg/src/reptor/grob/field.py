"""Coefficient fields for the Groebner engine: exact rationals and prime fields."""

from __future__ import annotations

from fractions import Fraction

import gmpy2

__all__ = ["Field", "QQ", "PrimeField", "parse_field"]


class Field:
    name: str
    modulus: int | None = None

    def __call__(self, x):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def to_python(self, a):
        raise NotImplementedError


class _Rationals(Field):
    name = "QQ"
    modulus = None

    def __call__(self, x):
        if isinstance(x, Fraction):
            return gmpy2.mpq(x.numerator, x.denominator)
        return gmpy2.mpq(x)

    def inv(self, a):
        return 1 / a

    def to_python(self, a) -> int | Fraction:
        if a.denominator == 1:
            return int(a.numerator)
        return Fraction(int(a.numerator), int(a.denominator))

    def __repr__(self):
        return "QQ"


QQ = _Rationals()


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or p >= 2**31 or not gmpy2.is_prime(p):
            raise ValueError(f"{p} is not a prime below 2^31")
        self.modulus = p
        self.name = f"GF({p})"

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus
        return int(x) % self.modulus

    def inv(self, a):
        return pow(a, -1, self.modulus)

    def to_python(self, a) -> int:
        return int(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("GF", self.modulus))

    def __repr__(self):
        return self.name


def parse_field(tag: str) -> Field:
    """``"q"`` for the rationals, ``"fp:<p>"`` for the prime field with p elements."""
    tag = tag.strip().lower()
    if tag in ("q", "qq"):
        return QQ
    if tag.startswith("fp:"):
        return PrimeField(int(tag[3:]))
    raise ValueError(f"unknown field tag {tag!r}; use 'q' or 'fp:<p>'")
