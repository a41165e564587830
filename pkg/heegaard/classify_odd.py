"""Invariants of linked p-groups for odd primes p: block determinants and their quadratic characters."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from heegaard.errors import ConsistencyError, InvalidLinkingError
from heegaard.linked_group import PrimaryComponent
from heegaard.matrices import IntegerMatrix
from heegaard.numtheory import legendre_symbol

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OddBlock:
    """
    One block of equal exponent.

    Attributes:
        exponent: the common exponent e, generators of order p^e
        multiplicity: number of generators in the block
        character: Legendre symbol of the block determinant mod p
        determinant: the integer determinant of p^e times the block (not part of equality)
    """

    exponent: int
    multiplicity: int
    character: int
    determinant: int = field(default=0, compare=False)


@dataclass(frozen=True)
class OddPrimeInvariants:
    prime: int
    blocks: tuple[OddBlock, ...]

    def characters(self) -> list[int]:
        return [block.character for block in self.blocks]

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(e for block in self.blocks for e in [block.exponent] * block.multiplicity)


def block_matrix(component: PrimaryComponent, indices: list[int], exponent: int) -> IntegerMatrix:
    """p^e times the linking restricted to the given generators, as integers in [0, p^e)."""
    scale = component.prime ** exponent
    rows = []
    for u in indices:
        row = []
        for v in indices:
            value = scale * component.linking[u][v]
            if value.denominator != 1:
                raise InvalidLinkingError(f"linking entry ({u}, {v}) has a denominator beyond {scale}")
            row.append(value.numerator)
        rows.append(row)
    return IntegerMatrix.from_rows(rows)


def seifert_invariants(component: PrimaryComponent) -> OddPrimeInvariants:
    """
    Characters of the diagonal boxes of the linking matrix of T(p).

    Raises:
        ValueError: if the component belongs to the prime 2
        ConsistencyError: if some box determinant is divisible by p
    """
    p = component.prime
    if p == 2:
        raise ValueError("seifert invariants are defined for odd primes only")
    blocks = []
    for exponent, indices in component.blocks():
        determinant = block_matrix(component, indices, exponent).det()
        character = legendre_symbol(determinant, p)
        if character == 0:
            raise ConsistencyError(f"block of exponent {exponent} at p={p} is degenerate")
        blocks.append(OddBlock(exponent, len(indices), character, determinant))
    logger.debug("p=%d characters %s", p, [b.character for b in blocks])
    return OddPrimeInvariants(p, tuple(blocks))


def odd_equivalent(first: PrimaryComponent, second: PrimaryComponent) -> bool:
    if first.prime != second.prime or first.exponents != second.exponents:
        return False
    return seifert_invariants(first) == seifert_invariants(second)
