"""Canonical dyadic rationals k/2**n used as time indices.

Every non-negative dyadic rational has exactly one canonical representation:
the numerator is odd, or the level is 0 (integers, including 0, live at
level 0).  Keeping the key exact (two integers, never a float) is what makes
the noise indexing order-independent and collision-free.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering


@total_ordering
@dataclass(frozen=True)
class Dyadic:
    """A non-negative dyadic rational numerator/2**level in canonical form."""

    numerator: int
    level: int

    def __post_init__(self):
        if self.numerator < 0 or self.level < 0:
            raise ValueError("dyadic components must be non-negative")
        if self.level > 0 and self.numerator % 2 == 0:
            raise ValueError(
                f"{self.numerator}/2^{self.level} is not canonical; "
                "use canonicalize()"
            )

    @property
    def value(self) -> float:
        """The rational as a double (exact for level < 53 and moderate k)."""
        return self.numerator / (1 << self.level)

    def is_on_level(self, n: int) -> bool:
        """True if the point lies on the grid {k/2**n}."""
        return self.level <= n

    def index_at_level(self, n: int) -> int:
        """Grid index k such that self == k/2**n; requires is_on_level(n)."""
        if not self.is_on_level(n):
            raise ValueError(f"{self} is not on the level-{n} grid")
        return self.numerator << (n - self.level)

    def decimal(self) -> str:
        """Exact decimal string (dyadics terminate in base 10)."""
        if self.level == 0:
            return str(self.numerator)
        digits = str(self.numerator * 5**self.level).rjust(self.level + 1, "0")
        return digits[: -self.level] + "." + digits[-self.level :]

    @classmethod
    def from_float(cls, t: float) -> "Dyadic":
        """Exact conversion; every finite non-negative double is dyadic."""
        if not t >= 0.0:
            raise ValueError(f"dyadic times are non-negative, got {t!r}")
        num, den = float(t).as_integer_ratio()
        return canonicalize(num, den.bit_length() - 1)

    def __lt__(self, other: "Dyadic") -> bool:
        lvl = max(self.level, other.level)
        return self.index_at_level(lvl) < other.index_at_level(lvl)

    def __str__(self) -> str:
        if self.level == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.level}"


def canonicalize(k: int, n: int) -> Dyadic:
    """Reduce k/2**n to the unique canonical Dyadic with the same value."""
    if k < 0 or n < 0:
        raise ValueError("dyadic components must be non-negative")
    if k == 0:
        return Dyadic(0, 0)
    while k % 2 == 0 and n > 0:
        k //= 2
        n -= 1
    return Dyadic(k, n)
