"""Exact truncated power series in one variable x (read: x = q^2).

Coefficients are exact rationals; every operation tracks the minimum
cutoff of its operands, so a coefficient is only ever reported when it is
exactly known.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = ["Series"]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"series coefficients must be exact, got {type(c).__name__}")


@dataclass(frozen=True)
class Series:
    """Power series known exactly up to and including degree ``cutoff``."""

    coeffs: tuple[Fraction, ...]
    cutoff: int

    def __post_init__(self):
        if self.cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        if len(self.coeffs) != self.cutoff + 1:
            raise ValueError("coefficient list must have length cutoff + 1")

    @staticmethod
    def from_coeffs(coeffs, cutoff: int | None = None) -> "Series":
        cs = tuple(_as_fraction(c) for c in coeffs)
        if cutoff is None:
            cutoff = len(cs) - 1
        if len(cs) < cutoff + 1:
            cs = cs + (Fraction(0),) * (cutoff + 1 - len(cs))
        return Series(cs[: cutoff + 1], cutoff)

    @staticmethod
    def zero(cutoff: int) -> "Series":
        return Series((Fraction(0),) * (cutoff + 1), cutoff)

    @staticmethod
    def one(cutoff: int) -> "Series":
        return Series((Fraction(1),) + (Fraction(0),) * cutoff, cutoff)

    @staticmethod
    def monomial(k: int, cutoff: int, c=1) -> "Series":
        cs = [Fraction(0)] * (cutoff + 1)
        if 0 <= k <= cutoff:
            cs[k] = _as_fraction(c)
        return Series(tuple(cs), cutoff)

    @staticmethod
    def geometric(k: int, cutoff: int) -> "Series":
        """1 / (1 - x^k)."""
        if k < 1:
            raise ValueError("geometric exponent must be >= 1")
        cs = [Fraction(0)] * (cutoff + 1)
        j = 0
        while j <= cutoff:
            cs[j] = Fraction(1)
            j += k
        return Series(tuple(cs), cutoff)

    @staticmethod
    def inv_prod_one_minus(exponents, cutoff: int) -> "Series":
        """Product of 1/(1 - x^k) over ``exponents`` (multiplicities allowed)."""
        out = Series.one(cutoff)
        for k in exponents:
            out = out * Series.geometric(k, cutoff)
        return out

    def __getitem__(self, k: int) -> Fraction:
        if not 0 <= k <= self.cutoff:
            raise IndexError(f"coefficient {k} beyond cutoff {self.cutoff}")
        return self.coeffs[k]

    def truncate(self, cutoff: int) -> "Series":
        if cutoff > self.cutoff:
            raise ValueError(f"cannot extend cutoff {self.cutoff} to {cutoff}")
        return Series(self.coeffs[: cutoff + 1], cutoff)

    def __add__(self, other: "Series") -> "Series":
        c = min(self.cutoff, other.cutoff)
        return Series(
            tuple(self.coeffs[k] + other.coeffs[k] for k in range(c + 1)), c
        )

    def __sub__(self, other: "Series") -> "Series":
        c = min(self.cutoff, other.cutoff)
        return Series(
            tuple(self.coeffs[k] - other.coeffs[k] for k in range(c + 1)), c
        )

    def __mul__(self, other) -> "Series":
        if isinstance(other, (int, Fraction)):
            f = _as_fraction(other)
            return Series(tuple(c * f for c in self.coeffs), self.cutoff)
        c = min(self.cutoff, other.cutoff)
        cs = [Fraction(0)] * (c + 1)
        for i, a in enumerate(self.coeffs[: c + 1]):
            if a == 0:
                continue
            for j in range(c + 1 - i):
                b = other.coeffs[j]
                if b:
                    cs[i + j] += a * b
        return Series(tuple(cs), c)

    __rmul__ = __mul__

    def shift(self, k: int) -> "Series":
        """Multiply by x^k, keeping the cutoff (low coefficients become 0)."""
        if k < 0:
            raise ValueError("shift must be >= 0")
        cs = (Fraction(0),) * min(k, self.cutoff + 1) + self.coeffs
        return Series(cs[: self.cutoff + 1], self.cutoff)

    def substitute_power(self, k: int) -> "Series":
        """Series in x^k: f(x) -> f(x^k), exact to the same cutoff."""
        if k < 1:
            raise ValueError("substitution power must be >= 1")
        cs = [Fraction(0)] * (self.cutoff + 1)
        for j, a in enumerate(self.coeffs):
            if j * k > self.cutoff:
                break
            cs[j * k] = a
        return Series(tuple(cs), self.cutoff)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise ValueError("series has non-integer coefficients")
        return tuple(int(c) for c in self.coeffs)

    def to_json(self) -> dict:
        out = []
        for c in self.coeffs:
            out.append(int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}")
        return {"cutoff": self.cutoff, "coeffs": out}

    @staticmethod
    def from_json(data) -> "Series":
        cs = [Fraction(c) if isinstance(c, str) else Fraction(int(c)) for c in data["coeffs"]]
        return Series.from_coeffs(cs, int(data["cutoff"]))

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        tail = ", ..." if self.cutoff >= 8 else ""
        return f"Series[x^<={self.cutoff}]({shown}{tail})"
