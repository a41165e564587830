"""Number-theoretic helpers: primality, residue symbols, Hensel lifting, CRT and unit groups."""

from __future__ import annotations

import logging
from math import gcd, prod
from typing import Sequence

from sympy import factorint, multiplicity, totient
from sympy.core.intfunc import igcdex
from sympy.ntheory.modular import crt

from heegaard.config import get_settings
from heegaard.errors import NonCoprimeModuliError, NotLiftableError, NotPrimeError

logger = logging.getLogger(__name__)

# Miller-Rabin with these bases is exact below 3317044064679887385961981.
MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _miller_rabin(n: int, witnesses: Sequence[int]) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in witnesses:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int, trial_division_bound: int | None = None, deterministic_limit: int | None = None) -> bool:
    """
    Deterministic primality test.

    Trial division up to trial_division_bound settles small inputs and finds
    small factors; larger inputs go through Miller-Rabin with a witness set
    that is exact below deterministic_limit.

    Raises:
        NotPrimeError: if n is too large to be decided deterministically
    """
    primality = get_settings().primality
    bound = trial_division_bound or primality.trial_division_bound
    limit = deterministic_limit or primality.deterministic_limit
    if n < 2:
        return False
    if n >= limit:
        raise NotPrimeError(f"{n} is beyond the deterministic primality range (< {limit})")
    d = 2
    while d <= bound and d * d <= n:
        if n % d == 0:
            return n == d
        d += 1 if d == 2 else 2
    if d * d > n:
        return True
    return _miller_rabin(n, MR_WITNESSES)


def legendre_symbol(a: int, p: int) -> int:
    """
    Legendre symbol (a/p) by Euler's criterion.

    Args:
        a: any integer
        p: an odd prime

    Returns:
        0 if p divides a, +1 for a nonzero square mod p, -1 otherwise
    """
    if p % 2 == 0 or not is_prime(p):
        raise NotPrimeError(f"legendre symbol needs an odd prime modulus, got {p}")
    value = pow(a % p, (p - 1) // 2, p)
    if value == 0:
        return 0
    return 1 if value == 1 else -1


def mod_inverse(a: int, m: int) -> int:
    """Inverse of a modulo m in [0, m); raises ValueError if a is not a unit."""
    if m == 1:
        return 0
    return pow(a, -1, m)


def _evaluate(coeffs: Sequence[int], x: int) -> int:
    a, b, c = coeffs
    return (a * x + b) * x + c


def _derivative(coeffs: Sequence[int], x: int) -> int:
    a, b, _ = coeffs
    return 2 * a * x + b


def hensel_sqrt_solve(coeffs: Sequence[int], p: int, k: int, root: int) -> int:
    """
    Lift a root of f(x) = a*x^2 + b*x + c from mod p^(k-1) to mod p^k.

    Args:
        coeffs: (a, b, c)
        p: a prime
        k: target exponent, k >= 2
        root: r with f(r) = 0 mod p^(k-1)

    Returns:
        the unique r + t*p^(k-1), 0 <= t < p, with f = 0 mod p^k
        (r taken mod p^(k-1))

    Raises:
        NotLiftableError: if f'(r) = 0 mod p
    """
    if k < 2:
        raise ValueError(f"lifting needs a target exponent k >= 2, got {k}")
    base = p ** (k - 1)
    r = root % base
    if _evaluate(coeffs, r) % base:
        raise ValueError(f"{root} is not a root of {tuple(coeffs)} modulo {base}")
    slope = _derivative(coeffs, r) % p
    if slope == 0:
        raise NotLiftableError(f"derivative vanishes mod {p} at {r}; root cannot be lifted")
    t = (-(_evaluate(coeffs, r) // base) * mod_inverse(slope, p)) % p
    return r + t * base


def hensel_lift(coeffs: Sequence[int], p: int, k: int, root_mod_p: int) -> int:
    """Lift a simple root mod p all the way to a root mod p^k."""
    r = root_mod_p % p
    if _evaluate(coeffs, r) % p:
        raise ValueError(f"{root_mod_p} is not a root of {tuple(coeffs)} modulo {p}")
    for exponent in range(2, k + 1):
        r = hensel_sqrt_solve(coeffs, p, exponent, r)
    return r


def crt_combine(residues: Sequence[tuple[int, int]]) -> int:
    """
    Combine (value, modulus) pairs into the residue modulo the product.

    Raises:
        NonCoprimeModuliError: if two moduli share a factor
    """
    if not residues:
        return 0
    moduli = [m for _, m in residues]
    for i, m in enumerate(moduli):
        for n in moduli[i + 1:]:
            if gcd(m, n) != 1:
                raise NonCoprimeModuliError(f"moduli {m} and {n} are not coprime")
    solution = crt(moduli, [v for v, _ in residues])
    return int(solution[0]) % prod(moduli)


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(x, y, g) with x*a + y*b = g = gcd(a, b)."""
    x, y, g = igcdex(a, b)
    return int(x), int(y), int(g)


def valuation(n: int, p: int) -> int:
    return int(multiplicity(p, n)) if n else 0


def prime_factors(n: int) -> dict[int, int]:
    return {int(p): int(e) for p, e in factorint(n).items()}


def epsilon(a: int) -> int:
    """The sign of an odd a in Z/8: 1 if a = 1 mod 4, else 7 (that is, -1)."""
    return 1 if a % 4 == 1 else 7


def units(n: int) -> list[int]:
    return [x for x in range(1, n) if gcd(x, n) == 1] if n > 1 else [0]


def unit_count(n: int) -> int:
    return int(totient(n)) if n > 1 else 1


def sqrt_one(tau: int, tau_bar: int) -> list[int]:
    """Units x mod tau with x^2 = 1 mod tau_bar, by enumeration."""
    return [x for x in units(tau) if (x * x - 1) % tau_bar == 0]


def sqrt_one_count(tau: int, tau_bar: int) -> int:
    """
    |sqrt_one(tau, tau_bar)| from the structure of the unit group.

    tau_bar is either tau or 2*tau with tau even; in the latter case the
    2-part counts square roots of 1 mod 2^(e+1), each seen twice mod 2^e.
    """
    if tau == 1:
        return 1
    count = 1
    doubled = tau_bar == 2 * tau
    for p, e in prime_factors(tau).items():
        if p != 2:
            count *= 2
            continue
        exponent = e + 1 if doubled else e
        roots = 1 if exponent == 1 else 2 if exponent == 2 else 4
        count *= roots // 2 if doubled else roots
    return count
