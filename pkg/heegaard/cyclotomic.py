"""
Exact arithmetic in Z[zeta] for zeta a primitive 2^n-th root of unity.

An element of level n is a coefficient vector of length 2^(n-1) in
Z[x]/(x^(2^(n-1)) + 1), x standing for zeta = E(1/2^n). Elements of different
levels are compared and combined after embedding both into the larger ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from heegaard.errors import LevelError


@dataclass(frozen=True, eq=False)
class CyclotomicElement:
    level: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.level < 1:
            raise LevelError(f"cyclotomic level must be >= 1, got {self.level}")
        if len(self.coeffs) != 1 << (self.level - 1):
            raise LevelError(
                f"level {self.level} needs {1 << (self.level - 1)} coefficients, got {len(self.coeffs)}"
            )

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @classmethod
    def zero(cls, level: int = 1) -> CyclotomicElement:
        return cls(level, (0,) * (1 << (level - 1)))

    @classmethod
    def from_int(cls, value: int, level: int = 1) -> CyclotomicElement:
        return cls(level, (int(value),) + (0,) * ((1 << (level - 1)) - 1))

    def embed(self, level: int) -> CyclotomicElement:
        """Image under zeta_(2^n) = zeta_(2^m)^(2^(m-n)), m >= n."""
        if level < self.level:
            raise LevelError(f"cannot embed level {self.level} into level {level}")
        if level == self.level:
            return self
        step = 1 << (level - self.level)
        coeffs = [0] * (1 << (level - 1))
        for i, c in enumerate(self.coeffs):
            coeffs[i * step] = c
        return CyclotomicElement(level, tuple(coeffs))

    def _coerce(self, other) -> CyclotomicElement | None:
        if isinstance(other, CyclotomicElement):
            return other
        if isinstance(other, int):
            return CyclotomicElement.from_int(other)
        return None

    def _unified(self, other: CyclotomicElement) -> tuple[CyclotomicElement, CyclotomicElement]:
        level = max(self.level, other.level)
        return self.embed(level), other.embed(level)

    def __add__(self, other) -> CyclotomicElement:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._unified(other)
        return CyclotomicElement(a.level, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    def __radd__(self, other) -> CyclotomicElement:
        return self + other

    def __neg__(self) -> CyclotomicElement:
        return CyclotomicElement(self.level, tuple(-x for x in self.coeffs))

    def __sub__(self, other) -> CyclotomicElement:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> CyclotomicElement:
        return (-self) + other

    def __mul__(self, other) -> CyclotomicElement:
        if isinstance(other, int):
            return CyclotomicElement(self.level, tuple(other * x for x in self.coeffs))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._unified(other)
        n = a.degree
        out = [0] * n
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if not y:
                    continue
                k = i + j
                # x^n = -1
                if k < n:
                    out[k] += x * y
                else:
                    out[k - n] -= x * y
        return CyclotomicElement(a.level, tuple(out))

    def __rmul__(self, other) -> CyclotomicElement:
        return self * other

    def __pow__(self, exponent: int) -> CyclotomicElement:
        if exponent < 0:
            raise ValueError("only nonnegative powers are supported")
        result = CyclotomicElement.from_int(1, self.level)
        base = self
        while exponent > 0:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conj(self) -> CyclotomicElement:
        """Complex conjugate, zeta -> zeta^(-1)."""
        n = self.degree
        coeffs = [0] * n
        coeffs[0] = self.coeffs[0]
        for i in range(1, n):
            coeffs[n - i] = -self.coeffs[i]
        return CyclotomicElement(self.level, tuple(coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @cached_property
    def reduced(self) -> CyclotomicElement:
        """The same element written at the smallest level that contains it."""
        element = self
        while element.level > 1 and not any(element.coeffs[1::2]):
            element = CyclotomicElement(element.level - 1, element.coeffs[::2])
        return element

    def rational_value(self) -> int | None:
        """The element as an integer when it lies in Z, else None."""
        r = self.reduced
        return r.coeffs[0] if r.level == 1 else None

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._unified(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        r = self.reduced
        return hash((r.level, r.coeffs))

    def __repr__(self) -> str:
        return f"CyclotomicElement({self.level}, {self.coeffs})"

    def __str__(self) -> str:
        r = self.reduced
        if r.level == 1:
            return str(r.coeffs[0])
        terms = []
        for i, c in enumerate(r.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                power = "z" if i == 1 else f"z^{i}"
                terms.append(power if c == 1 else f"-{power}" if c == -1 else f"{c}*{power}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"{body}  (z = E(1/{1 << r.level}))"


def root_of_unity(numerator: int, level: int) -> CyclotomicElement:
    """zeta^numerator with zeta = E(1/2^level)."""
    n = 1 << (level - 1)
    e = numerator % (2 * n)
    coeffs = [0] * n
    if e < n:
        coeffs[e] = 1
    else:
        coeffs[e - n] = -1
    return CyclotomicElement(level, tuple(coeffs))


def rho(level: int = 3) -> CyclotomicElement:
    """rho = E(1/8), written at the requested level (>= 3)."""
    if level < 3:
        raise LevelError(f"E(1/8) needs level >= 3, got {level}")
    return root_of_unity(1 << (level - 3), level)


def sqrt2(level: int = 3) -> CyclotomicElement:
    """sqrt(2) = rho - rho^3, embedded at the requested level (>= 3)."""
    if level < 3:
        raise LevelError(f"sqrt(2) needs level >= 3, got {level}")
    return (root_of_unity(1, 3) - root_of_unity(3, 3)).embed(level)


def sqrt2_power(exponent: int, level: int = 3) -> CyclotomicElement:
    """(sqrt 2)^exponent, exponent >= 0."""
    base = CyclotomicElement.from_int(1 << (exponent // 2), level)
    return base * sqrt2(level) if exponent % 2 else base


def exp_2pi_i(value: Fraction, level: int) -> CyclotomicElement:
    """E(value) = exp(2*pi*i*value) for value with denominator dividing 2^level."""
    value = Fraction(value)
    scale = (1 << level) // value.denominator
    if scale * value.denominator != 1 << level:
        raise LevelError(f"E({value}) does not lie in level {level}")
    return root_of_unity(value.numerator * scale, level)
