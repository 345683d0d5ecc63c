"""Arithmetic in the residue class ring Z/p^s.

Residues are stored as least non-negative integers and every operation
re-normalizes, so equality of elements is plain integer equality.  The
ring is a local ring whose maximal ideal is generated by ``p``; an element
is a unit exactly when ``p`` does not divide it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import (
    ContextMismatch,
    ModulusTooLarge,
    NotAUnit,
    NotPrime,
    ZeroHasNoDecomposition,
)

# Largest supported modulus; keeps every product of two residues inside
# a signed 64-bit word.
MAX_MODULUS = 2**31 - 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def valuation(x: int, p: int, s: int) -> int:
    """p-adic valuation of a residue mod p**s, with valuation(0) == s."""
    x %= p**s
    if x == 0:
        return s
    t = 0
    while x % p == 0:
        x //= p
        t += 1
    return t


def inverse_mod(x: int, modulus: int) -> int:
    """Inverse of ``x`` modulo ``modulus``; raises NotAUnit if none exists."""
    try:
        return pow(x, -1, modulus)
    except ValueError:
        raise NotAUnit(f"{x % modulus} is not invertible modulo {modulus}") from None


@dataclass(frozen=True)
class RingContext:
    """The ring Z/p^s for a prime ``p`` and exponent ``s >= 1``."""

    p: int
    s: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise NotPrime(f"p={self.p} is not prime")
        if not isinstance(self.s, int) or self.s < 1:
            raise ValueError(f"s={self.s} must be a positive integer")
        if self.p**self.s > MAX_MODULUS:
            raise ModulusTooLarge(f"p^s={self.p}^{self.s} exceeds {MAX_MODULUS}")

    @property
    def modulus(self) -> int:
        return self.p**self.s

    @property
    def is_field(self) -> bool:
        return self.s == 1

    def __call__(self, value: int) -> RingElement:
        return RingElement(value % self.modulus, self)

    def elements(self) -> Iterator[RingElement]:
        for v in range(self.modulus):
            yield RingElement(v, self)

    def units(self) -> Iterator[RingElement]:
        for v in range(self.modulus):
            if v % self.p:
                yield RingElement(v, self)

    def maximal_ideal(self) -> Iterator[RingElement]:
        for v in range(0, self.modulus, self.p):
            yield RingElement(v, self)

    def unit_count(self) -> int:
        return (self.p - 1) * self.p ** (self.s - 1)

    def residue_field(self) -> RingContext:
        return RingContext(self.p, 1)

    def __str__(self) -> str:
        return f"Z/{self.p}^{self.s}"


@dataclass(frozen=True)
class RingElement:
    value: int
    context: RingContext

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.context.modulus:
            object.__setattr__(self, "value", self.value % self.context.modulus)

    def _coerce(self, other: object) -> int:
        if isinstance(other, RingElement):
            if other.context != self.context:
                raise ContextMismatch(f"{other.context} vs {self.context}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> RingElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.context(self.value + o)

    __radd__ = __add__

    def __sub__(self, other: object) -> RingElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.context(self.value - o)

    def __rsub__(self, other: object) -> RingElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.context(o - self.value)

    def __mul__(self, other: object) -> RingElement:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.context(self.value * o)

    __rmul__ = __mul__

    def __neg__(self) -> RingElement:
        return self.context(-self.value)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.context.modulus})"


def is_unit(x: RingElement) -> bool:
    return x.value % x.context.p != 0


def invert_unit(x: RingElement) -> RingElement:
    if not is_unit(x):
        raise NotAUnit(f"{x.value} is divisible by {x.context.p}")
    return x.context(inverse_mod(x.value, x.context.modulus))


def total_valuation(x: RingElement) -> int:
    """Valuation defined on every element; zero gets ``s``."""
    return valuation(x.value, x.context.p, x.context.s)


def valuation_decompose(x: RingElement) -> tuple[int, RingElement]:
    """Write a nonzero ``x`` as ``u * p**t`` with ``u`` a unit.

    ``t`` is unique; ``u`` is only determined modulo ``p**(s-t)``, and the
    least non-negative unit in that class is returned.
    """
    ctx = x.context
    if x.value == 0:
        raise ZeroHasNoDecomposition("0 has no unit * p^t decomposition")
    t = valuation(x.value, ctx.p, ctx.s)
    u = (x.value // ctx.p**t) % ctx.p ** (ctx.s - t)
    return t, ctx(u)


def digit_expand(x: RingElement) -> tuple[int, ...]:
    """Base-p digits (t_0, ..., t_{s-1}) with x = sum t_i p^i."""
    ctx = x.context
    v = x.value
    digits = []
    for _ in range(ctx.s):
        v, d = divmod(v, ctx.p)
        digits.append(d)
    return tuple(digits)


def project_to_field(x: RingElement) -> RingElement:
    """Reduce modulo p (the first base-p digit)."""
    f = x.context.residue_field()
    return f(x.value % x.context.p)
