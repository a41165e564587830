"""
Invariants of minimal (unstabilized) splittings.

The determinant invariant |H| det(lambda_ij) mod tau_bar of a symmetric
rational lift, the resulting equivalence test and class count, Reidemeister
symbols, exterior-power determinants of presentations and the diagonal form
of odd-torsion linkings.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Literal, Sequence

from heegaard.classify_odd import block_matrix, seifert_invariants
from heegaard.config import get_settings
from heegaard.errors import ConsistencyError, DimensionError, NotGeneratingError, SizeLimitError
from heegaard.linked_group import (
    LinkedGroup,
    PrimaryComponent,
    Verdict,
    assemble,
    compare_invariants,
    find_isometry,
    isometries,
    linking_from_normal_form,
    primary_decompose,
    stable_invariants,
)
from heegaard.matrices import IntegerMatrix, rational_det, smith_normal_form
from heegaard.numtheory import prime_factors, sqrt_one, sqrt_one_count, unit_count, units
from heegaard.symplectic import PartialNormalForm, SymplecticMatrix, lens_matrix, partial_normal_form

logger = logging.getLogger(__name__)

Parity = Literal["even", "odd"]


@dataclass(frozen=True)
class SymmetricLift:
    """Rational symmetric matrix congruent to a linking mod 1."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        size = len(self.entries)
        for i in range(size):
            for j in range(size):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ConsistencyError(f"lift is not symmetric at ({i}, {j})")

    @classmethod
    def from_linking(cls, G: LinkedGroup) -> SymmetricLift:
        """Entries in [0, 1) on and above the diagonal, mirrored below."""
        t = G.t
        rows = [[G.linking[min(i, j)][max(i, j)] for j in range(t)] for i in range(t)]
        return cls(tuple(tuple(row) for row in rows))

    def shifted(self, rng: random.Random, spread: int = 3) -> SymmetricLift:
        """The lift plus a random symmetric integer matrix."""
        size = len(self.entries)
        rows = [list(row) for row in self.entries]
        for i in range(size):
            for j in range(i, size):
                shift = rng.randint(-spread, spread)
                rows[i][j] += shift
                if i != j:
                    rows[j][i] += shift
        return SymmetricLift(tuple(tuple(row) for row in rows))

    def congruent_to(self, G: LinkedGroup) -> bool:
        return all((self.entries[i][j] - G.linking[i][j]).denominator == 1 for i in range(G.t) for j in range(G.t))

    def determinant(self) -> Fraction:
        return rational_det(self.entries)


@dataclass(frozen=True)
class MinimalInvariant:
    tau: int
    tau_bar: int
    parity: Parity
    det_value: int


@dataclass(frozen=True)
class ReidemeisterSymbol:
    index: int
    prime: int
    value: int


@dataclass(frozen=True)
class ReidemeisterSymbols:
    symbols: tuple[ReidemeisterSymbol, ...] = ()

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(s.index, s.prime): s.value for s in self.symbols}


# -- evenness ---------------------------------------------------------------------

def _scaled_generators(G: LinkedGroup) -> list[tuple[int, ...]]:
    """Generators (tau_i / tau_1) y_i of the subgroup killed by tau_1."""
    tau = G.torsion[0]
    return [tuple(G.torsion[i] // tau if k == i else 0 for k in range(G.t)) for i in range(G.t)]


def _even_by_self_linking(G: LinkedGroup, limit: int) -> bool:
    tau = G.torsion[0]
    generators = _scaled_generators(G)
    if tau ** G.t > limit:
        # x^2 is quadratic in the coordinates and 2 lambda(u, v) always lies in <2/tau>
        return all((tau * G.self_link(u)).numerator % 2 == 0 for u in generators)
    for coefficients in itertools.product(range(tau), repeat=G.t):
        x = [sum(c * u[k] for c, u in zip(coefficients, generators)) for k in range(G.t)]
        if (tau * G.self_link(x)).numerator % 2:
            return False
    return True


def _even_by_lowest_block(G: LinkedGroup) -> bool:
    component = next(c for c in primary_decompose(G) if c.prime == 2)
    lowest, indices = component.blocks()[0]
    scale = 1 << lowest
    return all((scale * component.linking[u][u]).numerator % 2 == 0 for u in indices)


def evenness_criteria(G: LinkedGroup, limit: int | None = None) -> tuple[bool, bool]:
    """
    Both evenness tests: every x with tau x = 0 has x^2 in <2/tau>, and the
    lowest block of the 2-primary component is even.

    Odd tau gives (False, False).
    """
    if not G.torsion:
        raise ValueError("evenness needs a nontrivial torsion group")
    if G.torsion[0] % 2:
        return False, False
    bound = limit if limit is not None else get_settings().enumeration.max_enum
    return _even_by_self_linking(G, bound), _even_by_lowest_block(G)


def is_even_linking(G: LinkedGroup) -> bool:
    by_self_linking, by_lowest_block = evenness_criteria(G)
    if by_self_linking != by_lowest_block:
        raise ConsistencyError("evenness criteria disagree")
    return by_self_linking


def tau_bar(G: LinkedGroup) -> int:
    tau = G.torsion[0]
    return 2 * tau if is_even_linking(G) else tau


# -- determinant invariant ---------------------------------------------------------

def _volume_value(G: LinkedGroup, lift: SymmetricLift) -> int:
    value = G.size * lift.determinant()
    if value.denominator != 1:
        raise ConsistencyError(f"|H| det = {value} is not an integer")
    return value.numerator


def det_invariant(G: LinkedGroup, rng: random.Random | None = None, lifts: int | None = None) -> MinimalInvariant:
    """
    |H| det(lambda_ij) mod tau_bar of the torsion linking.

    The value is recomputed from randomly shifted symmetric lifts to confirm
    independence of the lift.

    Raises:
        ValueError: if G has no torsion
        ConsistencyError: if the value is not a unit mod tau or depends on the lift
    """
    if not G.torsion:
        raise ValueError("the determinant invariant needs a nontrivial torsion group")
    settings = get_settings()
    rng = rng if rng is not None else random.Random(settings.selftest.seed)
    count = lifts if lifts is not None else settings.lifts.randomized_lifts

    torsion = G.torsion_part()
    even = is_even_linking(torsion)
    tau = torsion.torsion[0]
    modulus = 2 * tau if even else tau
    base = SymmetricLift.from_linking(torsion)
    value = _volume_value(torsion, base) % modulus
    if gcd(value, tau) != 1:
        raise ConsistencyError(f"determinant invariant {value} is not a unit mod {tau}")
    for _ in range(count):
        other = _volume_value(torsion, base.shifted(rng)) % modulus
        if other != value:
            raise ConsistencyError(f"determinant invariant depends on the lift: {value} vs {other} mod {modulus}")
    logger.debug("det invariant %d mod %d (%s)", value, modulus, "even" if even else "odd")
    return MinimalInvariant(tau, modulus, "even" if even else "odd", value)


def realized_det_values(G: LinkedGroup) -> list[int]:
    """Determinant invariants of all volumes m * theta, m a unit mod tau."""
    invariant = det_invariant(G)
    return sorted({m * m * invariant.det_value % invariant.tau_bar for m in units(invariant.tau)})


# -- isometries and minimal equivalence -----------------------------------------------

def isometry_determinants(G: LinkedGroup, node_budget: int | None = None) -> set[int]:
    """
    {det h mod tau : h an isometry of G}, by exhaustive enumeration.

    Raises:
        SizeLimitError: above the isometry bound or when the node budget runs out
    """
    torsion = G.torsion_part()
    bound = get_settings().enumeration.isometry_bound
    if torsion.size > bound:
        raise SizeLimitError(torsion.size, bound, "isometry search")
    tau = torsion.torsion[0]
    return {h.det() % tau for h in isometries(torsion, torsion, node_budget=node_budget)}


def minimal_equivalence(H1: SymplecticMatrix, H2: SymplecticMatrix, node_budget: int | None = None) -> Verdict:
    """
    Equivalence of minimal splittings: isomorphic linked quotients and equal
    determinant invariants.

    Inputs that are stabilized or of different minimal genus are decided up to
    stabilization instead, with a note. When an isometry is found, the transport
    law det_1 = (det h)^2 det_2 mod tau_bar is re-verified; above the isometry
    bound the search is budgeted and the verdict carries "bounded-search".

    The determinants are compared as computed, never after transport by h, so
    isometric quotients can still give inequivalent splittings. L(5,1) and
    L(5,4) share the linking class of 1/5 but have det 1 and 4 mod 5; at genus 1
    q mod p is constant on a double coset, and class_count gives 2 for Z/5.
    """
    nf1, nf2 = partial_normal_form(H1), partial_normal_form(H2)
    G1, G2 = linking_from_normal_form(nf1), linking_from_normal_form(nf2)
    reasons = compare_invariants(stable_invariants(G1), stable_invariants(G2))
    if reasons:
        return Verdict(False, tuple(reasons))
    if nf1.stab_index or nf2.stab_index or nf1.minimal_genus != nf2.minimal_genus:
        return Verdict(True, notes=("stabilized input: decided up to stabilization",))
    if not G1.torsion:
        return Verdict(True)

    T1, T2 = G1.torsion_part(), G2.torsion_part()
    inv1, inv2 = det_invariant(T1), det_invariant(T2)
    qualifiers: tuple[str, ...] = ()
    exhausted = False
    try:
        h = find_isometry(T1, T2, node_budget=node_budget)
    except SizeLimitError:
        h, exhausted = None, True
    if h is None and not exhausted:
        raise ConsistencyError("equal stable invariants but no isometry found")
    if exhausted or T1.size > get_settings().enumeration.isometry_bound:
        qualifiers = ("bounded-search",)
    if h is not None:
        d = h.det()
        if (d * d * inv2.det_value - inv1.det_value) % inv1.tau_bar:
            raise ConsistencyError("isometry does not transport the determinant invariant")

    if inv1.det_value != inv2.det_value:
        reason = f"det {inv1.det_value} vs {inv2.det_value} mod {inv1.tau_bar}"
        return Verdict(False, (reason,), qualifiers)
    return Verdict(True, qualifiers=qualifiers)


def class_count(G: LinkedGroup, enum_limit: int | None = None) -> int:
    """|units mod tau| / |sqrt(1)|: the number of minimal splittings with linked quotient G."""
    invariant_tau = G.torsion[0] if G.torsion else 1
    if invariant_tau == 1:
        return 1
    modulus = tau_bar(G)
    limit = enum_limit if enum_limit is not None else get_settings().enumeration.class_count_enum_limit
    if invariant_tau <= limit:
        return len(units(invariant_tau)) // len(sqrt_one(invariant_tau, modulus))
    return unit_count(invariant_tau) // sqrt_one_count(invariant_tau, modulus)


# -- Reidemeister symbols ---------------------------------------------------------------

def reidemeister_symbols(nf: PartialNormalForm) -> ReidemeisterSymbols:
    """
    For i = 1..t-1 and every prime p dividing gcd(tau_2/tau_1, ..., tau_(i+1)/tau_i),
    the residue of q_ii mod p (0 exactly when p divides q_ii).
    """
    tau = nf.tau
    symbols = []
    divisor = 0
    for i in range(len(tau) - 1):
        divisor = gcd(divisor, tau[i + 1] // tau[i])
        if divisor <= 1:
            continue
        q = nf.q2[i, i]
        for p in sorted(prime_factors(divisor)):
            symbols.append(ReidemeisterSymbol(i + 1, p, q % p))
    return ReidemeisterSymbols(tuple(symbols))


# -- presentations ------------------------------------------------------------------------

def _check_generates(images: IntegerMatrix, torsion: Sequence[int]) -> None:
    r = len(torsion)
    if images.shape != (r, r):
        raise DimensionError(f"generator images must form a {r}x{r} matrix, got {images.shape}")
    stacked = IntegerMatrix.from_blocks([[images, IntegerMatrix.diagonal_matrix(list(torsion))]])
    if any(d != 1 for d in smith_normal_form(stacked).diag):
        raise NotGeneratingError("generator images do not generate the group")


def exterior_det(images: IntegerMatrix, torsion: Sequence[int]) -> int:
    """
    Volume det(alpha_ij) mod tau_1 of a minimal presentation, column i being
    the image of the i-th free generator.

    Raises:
        NotGeneratingError: if the images do not generate the group
    """
    _check_generates(images, torsion)
    return images.det() % torsion[0]


def is_unit_volume(value: int, tau: int) -> bool:
    return value % tau in {1 % tau, (-1) % tau}


def presentations_equivalent(first: IntegerMatrix, second: IntegerMatrix, torsion: Sequence[int]) -> bool:
    """Minimal presentations are equivalent iff their volumes agree up to sign mod tau_1."""
    tau = torsion[0]
    a, b = exterior_det(first, torsion), exterior_det(second, torsion)
    return (a - b) % tau == 0 or (a + b) % tau == 0


def stabilization_relates(first: IntegerMatrix, second: IntegerMatrix, f: IntegerMatrix, torsion: Sequence[int]) -> bool:
    """
    True when f is unimodular and (second + 0) f = first + 0 on the group,
    the presentations being padded with zero columns to the size of f.
    """
    if abs(f.det()) != 1:
        return False
    r, n = len(torsion), f.rows
    padding = IntegerMatrix.zeros(r, n - first.cols)
    left = IntegerMatrix.from_blocks([[second, IntegerMatrix.zeros(r, n - second.cols)]]) @ f
    right = IntegerMatrix.from_blocks([[first, padding]])
    return all((left[i, j] - right[i, j]) % torsion[i] == 0 for i in range(r) for j in range(n))


# -- odd torsion ----------------------------------------------------------------------------

def diagonalize_odd(G: LinkedGroup) -> LinkedGroup:
    """
    Diagonal linking isomorphic to G for odd torsion.

    Each equal-exponent block at p becomes diag(|A|/p^e, 1/p^e, ..., 1/p^e)
    with A the integer block matrix.

    Raises:
        ValueError: if some torsion coefficient is even
        ConsistencyError: if the characters change
    """
    if any(tau % 2 == 0 for tau in G.torsion):
        raise ValueError("diagonalization needs odd torsion")
    components = []
    for component in primary_decompose(G):
        p = component.prime
        diagonal = [Fraction(0)] * len(component.exponents)
        for exponent, indices in component.blocks():
            determinant = block_matrix(component, indices, exponent).det()
            scale = p ** exponent
            diagonal[indices[0]] = Fraction(determinant % scale, scale)
            for u in indices[1:]:
                diagonal[u] = Fraction(1, scale)
        size = len(diagonal)
        linking = [[diagonal[u] if u == v else Fraction(0) for v in range(size)] for u in range(size)]
        diagonalized = PrimaryComponent.create(p, component.exponents, linking)
        if seifert_invariants(diagonalized) != seifert_invariants(component):
            raise ConsistencyError(f"diagonalization changed the characters at p={p}")
        components.append(diagonalized)
    return assemble(components, G.free_rank)


def is_diagonal(G: LinkedGroup) -> bool:
    return all(G.linking[i][j] == 0 for i in range(G.t) for j in range(G.t) if i != j)


def diagonal_representative(G: LinkedGroup) -> SymplecticMatrix:
    """
    A gluing matrix with diagonal blocks whose linked quotient is G.

    Raises:
        ValueError: if the linking of G is not diagonal
    """
    if not is_diagonal(G):
        raise ValueError("diagonal representatives need a diagonal linking")
    r = G.free_rank
    lens = [lens_matrix(tau, (G.linking[i][i] * tau).numerator) for i, tau in enumerate(G.torsion)]

    def block(i: int, j: int, free: int) -> IntegerMatrix:
        return IntegerMatrix.direct_sum(
            IntegerMatrix.diagonal_matrix([m.matrix[i, j] for m in lens]),
            IntegerMatrix.diagonal_matrix([free] * r),
        )

    return SymplecticMatrix.from_blocks(block(0, 0, 1), block(0, 1, 0), block(1, 0, 0), block(1, 1, 1))

