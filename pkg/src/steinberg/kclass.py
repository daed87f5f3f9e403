"""K-theory classes of the projective line, hearts, and exact slope order.

A class is a pair (r, d) of rank and degree.  All phase/slope comparisons
are exact integer cross-products; hearts are symbolic, either the standard
heart of coherent sheaves (``HALF``) or a quiver heart ``Heart.quiver(n)``
indexed by an integer n >= 1.  Nothing here ever touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

__all__ = [
    "KClass",
    "Heart",
    "HALF",
    "Window",
    "ZERO",
    "DELTA",
    "INF_SLOPE",
    "euler_form",
    "stack_dim",
    "slope",
    "slope_cmp",
    "heart_positive",
    "tilt_class",
    "tilt_class_inv",
    "d_vec",
    "d_vec_inv",
    "twist_class",
    "window_member",
]


@dataclass(frozen=True, order=True)
class KClass:
    """An element (r, d) of K0 = Z^2: r is the rank, d the degree."""

    r: int
    d: int

    def __add__(self, other: "KClass") -> "KClass":
        return KClass(self.r + other.r, self.d + other.d)

    def __sub__(self, other: "KClass") -> "KClass":
        return KClass(self.r - other.r, self.d - other.d)

    def __neg__(self) -> "KClass":
        return KClass(-self.r, -self.d)

    def __mul__(self, k: int) -> "KClass":
        return KClass(k * self.r, k * self.d)

    __rmul__ = __mul__

    def __iter__(self) -> Iterator[int]:
        return iter((self.r, self.d))

    def is_zero(self) -> bool:
        return self.r == 0 and self.d == 0

    def to_json(self) -> list[int]:
        return [self.r, self.d]

    @staticmethod
    def from_json(data) -> "KClass":
        r, d = data
        return KClass(int(r), int(d))


ZERO = KClass(0, 0)
DELTA = KClass(0, 1)  # class of a point


@dataclass(frozen=True)
class Heart:
    """Symbolic abelian heart.

    ``nu is None`` is the heart of coherent sheaves (phase interval anchored
    at 1/2); ``nu = n >= 1`` is the n-th quiver heart, equivalent to
    representations of the Kronecker quiver.
    """

    nu: int | None = None

    def __post_init__(self):
        if self.nu is not None and self.nu < 1:
            raise ValueError(f"quiver heart index must be >= 1, got {self.nu}")

    @staticmethod
    def quiver(n: int) -> "Heart":
        return Heart(nu=n)

    @property
    def is_half(self) -> bool:
        return self.nu is None

    def to_json(self):
        return "half" if self.nu is None else {"nu": self.nu}

    @staticmethod
    def from_json(data) -> "Heart":
        if data == "half":
            return HALF
        return Heart(nu=int(data["nu"]))

    def __repr__(self) -> str:
        return "Heart(half)" if self.nu is None else f"Heart(nu={self.nu})"


HALF = Heart()


@dataclass(frozen=True)
class Window:
    """Quasi-compact truncation window, indexed by an integer m >= 1.

    Membership of an object is decided by its minimal semistable slope:
    slopes >= 1 - m pass (torsion always does).
    """

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"window index must be >= 1, got {self.m}")

    def to_json(self):
        return {"m": self.m}

    @staticmethod
    def from_json(data) -> "Window":
        return Window(m=int(data["m"]))


# Slopes are normalized pairs (num, den) with den >= 0; den == 0 encodes the
# infinite slope of torsion classes.
INF_SLOPE = (1, 0)


def euler_form(a: KClass, b: KClass) -> int:
    """Euler pairing <(r,d), (s,l)> = rs + rl - sd.

    >>> euler_form(KClass(2, -1), KClass(1, 3))
    9
    """
    return a.r * b.r + a.r * b.d - b.r * a.d


def stack_dim(a: KClass) -> int:
    """Dimension -r^2 of the moduli stack of sheaves of class ``a``."""
    if not heart_positive(a, HALF):
        raise ValueError(f"not the class of a sheaf: {a}")
    return -a.r * a.r


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def slope(a: KClass) -> tuple[int, int]:
    """Slope d/r as a normalized pair; torsion classes give INF_SLOPE."""
    if a.is_zero():
        raise ValueError("zero class has no slope")
    if a.r == 0:
        return INF_SLOPE
    g = _gcd(a.d, a.r)
    num, den = a.d // g, a.r // g
    if den < 0:
        num, den = -num, -den
    return (num, den)


def slope_cmp(a: KClass, b: KClass) -> int:
    """Exact slope comparison: -1, 0 or 1.  Torsion compares as +infinity."""
    for c in (a, b):
        if c.is_zero() or not heart_positive(c, HALF):
            raise ValueError(f"slope comparison needs a nonzero sheaf class, got {c}")
    pa, pb = slope(a), slope(b)
    lhs, rhs = pa[0] * pb[1], pb[0] * pa[1]
    return (lhs > rhs) - (lhs < rhs)


def heart_positive(a: KClass, h: Heart) -> bool:
    """Is ``a`` the class of a nonzero object of the heart ``h``?"""
    if h.is_half:
        return a.r > 0 or (a.r == 0 and a.d > 0)
    x, y = d_vec(h.nu, a)
    return not a.is_zero() and x >= 0 and y >= 0


def tilt_class(a: KClass) -> KClass:
    """Class map (r, d) -> (r+d, d) of the tilting equivalence.

    >>> tilt_class(KClass(0, 1))
    KClass(r=1, d=1)
    """
    return KClass(a.r + a.d, a.d)


def tilt_class_inv(a: KClass) -> KClass:
    """Inverse of :func:`tilt_class`: (r, d) -> (r-d, d)."""
    return KClass(a.r - a.d, a.d)


def d_vec(n: int, a: KClass) -> tuple[int, int]:
    """Dimension vector (nr+d, (n-1)r+d) of ``a`` in the n-th quiver heart.

    >>> d_vec(2, KClass(1, 0))
    (2, 1)
    """
    if n < 1:
        raise ValueError(f"quiver heart index must be >= 1, got {n}")
    return (n * a.r + a.d, (n - 1) * a.r + a.d)


@lru_cache(maxsize=None)
def d_vec_inv(n: int, v: tuple[int, int]) -> KClass:
    """Inverse of :func:`d_vec`: recover (r, d) from a dimension vector."""
    if n < 1:
        raise ValueError(f"quiver heart index must be >= 1, got {n}")
    x, y = v
    return KClass(x - y, n * y - (n - 1) * x)


def twist_class(a: KClass, k: int) -> KClass:
    """Class of the twist by the degree-k line bundle: (r, d) -> (r, d+kr)."""
    return KClass(a.r, a.d + k * a.r)


def window_member(min_slope: tuple[int, int], w: Window) -> bool:
    """Does an object with minimal semistable slope ``min_slope`` lie in ``w``?

    ``min_slope`` is a (num, den) pair with den > 0, or INF_SLOPE for
    torsion-only objects.  The boundary slope 1 - m is included.
    """
    num, den = min_slope
    if den == 0:
        return True
    if den < 0:
        raise ValueError(f"slope denominator must be >= 0, got {min_slope}")
    return num >= (1 - w.m) * den
