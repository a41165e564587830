"""
Linked abelian groups.

A linked group is H = Z^r + T with T = Z/tau_1 + ... + Z/tau_t and a
symmetric nonsingular Q/Z-valued linking on T, stored as the matrix of
linkings between the standard generators y_i. The module builds linked
groups from normalized gluing matrices, independently from the lagrangian
pair (B, H(B)), splits them into primary components and searches for
isometries between small ones.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import TYPE_CHECKING, Iterator, Sequence

from heegaard.config import get_settings
from heegaard.errors import ConsistencyError, DimensionError, InvalidLinkingError, SizeLimitError
from heegaard.matrices import IntegerMatrix, rational_det, smith_normal_form
from heegaard.numtheory import prime_factors, valuation
from heegaard.rationals import format_rational, is_integral, mod1, parse_rational
from heegaard.symplectic import PartialNormalForm, SymplecticMatrix, partial_normal_form, standard_j

if TYPE_CHECKING:
    from heegaard.classify_odd import OddPrimeInvariants
    from heegaard.classify_two import PhaseVector

logger = logging.getLogger(__name__)

Element = tuple[int, ...]
LinkingRows = tuple[tuple[Fraction, ...], ...]


def _reduced_rows(linking: Sequence[Sequence[Fraction | int | str]]) -> LinkingRows:
    return tuple(tuple(mod1(parse_rational(x)) for x in row) for row in linking)


class FiniteLinking:
    """
    Behaviour shared by every symmetric linking on a direct sum of cyclic
    groups Z/orders[0] + ... given by its matrix on the standard generators.
    """

    orders: tuple[int, ...]
    linking: LinkingRows

    @property
    def size(self) -> int:
        return prod(self.orders)

    def link(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.linking[i]
            for j, yj in enumerate(y):
                if yj:
                    total += xi * yj * row[j]
        return mod1(total)

    def self_link(self, x: Sequence[int]) -> Fraction:
        return self.link(x, x)

    def elements(self) -> Iterator[Element]:
        return itertools.product(*(range(n) for n in self.orders))

    def enumerate_elements(self, limit: int | None = None) -> Iterator[Element]:
        """Elements in lexicographic order, refusing groups larger than the enumeration bound."""
        bound = limit if limit is not None else get_settings().enumeration.max_enum
        if self.size > bound:
            raise SizeLimitError(self.size, bound)
        return self.elements()

    def gram(self, basis: Sequence[Sequence[int]]) -> list[list[Fraction]]:
        """Linking matrix of the given vectors, entries in [0, 1)."""
        return [[self.link(u, v) for v in basis] for u in basis]

    def linking_strings(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.linking]

    def _check_symmetric_linking(self) -> None:
        k = len(self.orders)
        if len(self.linking) != k or any(len(row) != k for row in self.linking):
            raise InvalidLinkingError(f"linking must be a {k}x{k} matrix")
        for i in range(k):
            for j in range(k):
                value = self.linking[i][j]
                if not 0 <= value < 1:
                    raise InvalidLinkingError(f"linking entry ({i}, {j}) = {value} is not reduced mod 1")
                if value != self.linking[j][i]:
                    raise InvalidLinkingError(f"linking is not symmetric at ({i}, {j})")
                if not (is_integral(self.orders[i] * value) and is_integral(self.orders[j] * value)):
                    raise InvalidLinkingError(
                        f"linking entry ({i}, {j}) = {value} is incompatible with orders "
                        f"{self.orders[i]} and {self.orders[j]}"
                    )


@dataclass(frozen=True, eq=False)
class LinkedGroup(FiniteLinking):
    """
    Free rank, torsion coefficients tau_1 | ... | tau_t and the linking matrix.

    Equality is isomorphism of linked groups (equal classification
    invariants); use structurally_equal for entry-by-entry comparison.
    """

    free_rank: int
    torsion: tuple[int, ...]
    linking: LinkingRows

    def __post_init__(self):
        if self.free_rank < 0:
            raise InvalidLinkingError(f"free rank must be >= 0, got {self.free_rank}")
        for i, tau in enumerate(self.torsion):
            if tau < 2:
                raise InvalidLinkingError(f"torsion coefficients must be >= 2, got {tau}")
            if i and tau % self.torsion[i - 1]:
                raise InvalidLinkingError(f"torsion coefficients must divide each other: {self.torsion}")
        self._check_symmetric_linking()
        if self.torsion and not is_nonsingular(self.torsion, self.linking):
            raise InvalidLinkingError("linking is singular")
        if self.torsion and gcd(volume_determinant(self.torsion, self.linking), self.torsion[0]) != 1:
            raise ConsistencyError("|H| det(linking) is not a unit although the linking is nonsingular")

    @classmethod
    def create(cls, free_rank: int, torsion: Sequence[int], linking: Sequence[Sequence[Fraction | int | str]]) -> LinkedGroup:
        """Build a linked group, reducing every linking entry into [0, 1)."""
        return cls(int(free_rank), tuple(int(t) for t in torsion), _reduced_rows(linking))

    @classmethod
    def from_dict(cls, data: dict) -> LinkedGroup:
        return cls.create(
            free_rank=data.get("rank", 0),
            torsion=data.get("torsion", []),
            linking=data.get("linking", []),
        )

    @property
    def orders(self) -> tuple[int, ...]:
        return self.torsion

    @property
    def t(self) -> int:
        return len(self.torsion)

    def torsion_part(self) -> LinkedGroup:
        return LinkedGroup(0, self.torsion, self.linking)

    def structurally_equal(self, other: LinkedGroup) -> bool:
        return (self.free_rank, self.torsion, self.linking) == (other.free_rank, other.torsion, other.linking)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinkedGroup):
            return NotImplemented
        return self.structurally_equal(other) or stable_invariants(self) == stable_invariants(other)

    def __hash__(self) -> int:
        return hash((self.free_rank, self.torsion))

    def __repr__(self) -> str:
        return f"LinkedGroup(free_rank={self.free_rank}, torsion={self.torsion}, linking={self.linking_strings()})"


def volume_determinant(orders: Sequence[int], linking: Sequence[Sequence[Fraction]]) -> int:
    """|H| * det(linking) for the given rational lift; an integer for any valid lift."""
    value = prod(orders) * rational_det(linking)
    if value.denominator != 1:
        raise ConsistencyError(f"|H| det(linking) = {value} is not an integer")
    return value.numerator


def is_nonsingular(orders: Sequence[int], linking: Sequence[Sequence[Fraction]]) -> bool:
    """
    True when x -> linking(x, -) maps the group onto its character group.

    The character group is generated by chi_j with chi_j(y_k) = delta_jk / orders_j,
    and linking(y_i, -) = sum_j (linking_ij * orders_j) chi_j; surjectivity is read
    off the Smith form of those coordinates stacked with the relations.
    """
    t = len(orders)
    coordinates = [[int(linking[i][j] * orders[j]) for i in range(t)] for j in range(t)]
    relations = IntegerMatrix.diagonal_matrix(list(orders)).tolist()
    stacked = IntegerMatrix.from_rows([coordinates[j] + relations[j] for j in range(t)])
    return all(d == 1 for d in smith_normal_form(stacked).diag)


def linking_from_normal_form(nf: PartialNormalForm) -> LinkedGroup:
    """Linked quotient of a normalized gluing matrix: linking_ij = q_ij / tau_j mod 1."""
    Q = nf.q2
    linking = [[Fraction(Q[i, j], nf.tau[j]) for j in range(nf.t)] for i in range(nf.t)]
    try:
        return LinkedGroup.create(nf.r, nf.tau, linking)
    except InvalidLinkingError as e:
        raise ConsistencyError(f"normal form produced an invalid linking: {e}") from e


def linked_group_of(H: SymplecticMatrix) -> LinkedGroup:
    return linking_from_normal_form(partial_normal_form(H))


@dataclass(frozen=True)
class HeegaardPair:
    """
    Lagrangians B = span(b_1..b_g) and B_bar in the symplectic space with
    basis a_1..a_g, b_1..b_g; B_bar is given by a 2g x g generator matrix.
    """

    genus: int
    b_bar: IntegerMatrix

    def __post_init__(self):
        g = self.genus
        if self.b_bar.shape != (2 * g, g):
            raise DimensionError(f"B_bar generators must form a {2 * g}x{g} matrix, got {self.b_bar.shape}")
        if not (self.b_bar.T @ standard_j(g) @ self.b_bar).is_zero():
            raise InvalidLinkingError("B_bar generators are not isotropic")
        if g and any(d != 1 for d in smith_normal_form(self.b_bar).diag):
            raise InvalidLinkingError("B_bar is not a rank-g direct summand")

    @property
    def b(self) -> IntegerMatrix:
        g = self.genus
        return IntegerMatrix.from_blocks([[IntegerMatrix.zeros(g)], [IntegerMatrix.identity(g)]]) if g else IntegerMatrix.zeros(0)


def pair_from_matrix(H: SymplecticMatrix) -> HeegaardPair:
    """The pair (B, H(B)); H(B) is spanned by the last g columns of H."""
    g = H.genus
    return HeegaardPair(g, H.matrix.block(0, 2 * g, g, 2 * g))


def quotient_with_linking(pair: HeegaardPair) -> LinkedGroup:
    """
    Quotient Z^2g / (B + B_bar) with its linking, computed from the pair alone.

    For a torsion generator u of order m, m*u = b + b_bar with b in B and
    b_bar in B_bar, and linking(u, v) = (1/m) (b . v) with the symplectic
    product b . v = b^T J v.

    Raises:
        ConsistencyError: if a torsion relation does not decompose in B + B_bar
    """
    g = pair.genus
    if g == 0:
        return LinkedGroup(0, (), ())
    generators = IntegerMatrix.from_blocks([[pair.b, pair.b_bar]])
    snf = smith_normal_form(generators)
    J = standard_j(g)
    free_rank = sum(1 for d in snf.diag if d == 0)
    torsion_index = [i for i, d in enumerate(snf.diag) if d > 1]

    lifts = []
    for i in torsion_index:
        m = snf.diag[i]
        u = snf.U_inv.column(i)
        c = snf.V.column(i)
        combination = [sum(generators[k, l] * c[l] for l in range(2 * g)) for k in range(2 * g)]
        if combination != [m * x for x in u]:
            raise ConsistencyError(f"torsion relation {i} does not decompose in B + B_bar")
        b_part = [0] * g + list(c[:g])
        lifts.append((m, u, b_part))

    linking = []
    for m, _, b_part in lifts:
        row = []
        for _, v, _ in lifts:
            jv = [sum(J[k, l] * v[l] for l in range(2 * g)) for k in range(2 * g)]
            row.append(Fraction(sum(x * y for x, y in zip(b_part, jv)), m))
        linking.append(row)
    rows = _reduced_rows(linking)
    if any(rows[i][j] != rows[j][i] for i in range(len(rows)) for j in range(len(rows))):
        raise ConsistencyError("lagrangian-pair linking is not symmetric")
    logger.debug("lagrangian quotient: free rank %d, torsion %s", free_rank, [lift[0] for lift in lifts])
    return LinkedGroup(free_rank, tuple(m for m, _, _ in lifts), rows)


@dataclass(frozen=True)
class PrimaryComponent(FiniteLinking):
    """
    The p-primary part T(p): generators g_i of orders p^e_i (e_1 <= e_2 <= ...)
    and their linking matrix.
    """

    prime: int
    exponents: tuple[int, ...]
    linking: LinkingRows

    def __post_init__(self):
        if any(e < 1 for e in self.exponents) or list(self.exponents) != sorted(self.exponents):
            raise InvalidLinkingError(f"exponents must be positive and ascending: {self.exponents}")
        self._check_symmetric_linking()

    @classmethod
    def create(cls, prime: int, exponents: Sequence[int], linking: Sequence[Sequence[Fraction | int | str]]) -> PrimaryComponent:
        return cls(int(prime), tuple(int(e) for e in exponents), _reduced_rows(linking))

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(self.prime ** e for e in self.exponents)

    @property
    def degree(self) -> int:
        return max(self.exponents, default=0)

    def blocks(self) -> list[tuple[int, list[int]]]:
        """Indices grouped by equal exponent, in ascending order of exponent."""
        grouped: dict[int, list[int]] = {}
        for i, e in enumerate(self.exponents):
            grouped.setdefault(e, []).append(i)
        return sorted(grouped.items())

    def rank_at(self, exponent: int) -> int:
        return sum(1 for e in self.exponents if e == exponent)

    def rebased(self, rng: random.Random, steps: int = 8) -> PrimaryComponent:
        """
        The same linking on a random new generating set of the same orders.

        Each step scales a generator by a unit or adds a multiple of another
        generator to it; g_i + c g_k keeps order p^e_i when p^(e_k - e_i) divides c.
        """
        p, k = self.prime, len(self.exponents)
        rows = [[int(i == u) for i in range(k)] for u in range(k)]
        for _ in range(steps):
            i = rng.randrange(k)
            if k == 1 or rng.random() < 0.3:
                unit = rng.randrange(1, p)
                rows[i] = [unit * x for x in rows[i]]
                continue
            other = rng.choice([u for u in range(k) if u != i])
            c = rng.randrange(1, p ** self.exponents[other]) * p ** max(0, self.exponents[other] - self.exponents[i])
            rows[i] = [x + c * y for x, y in zip(rows[i], rows[other])]
        rows = [[x % n for x, n in zip(row, self.orders)] for row in rows]
        return PrimaryComponent.create(p, self.exponents, self.gram(rows))


def primary_decompose(G: LinkedGroup) -> list[PrimaryComponent]:
    """
    Split the torsion of G into its primary components.

    g_(i,p) = (tau_i / p^e_i) y_i generates the p-part of the i-th summand and
    linking(g_(i,p), g_(j,p)) = (tau_i / p^e_i)(tau_j / p^e_j) linking_ij.

    Raises:
        ConsistencyError: if generators of different primes link nontrivially
    """
    if not G.torsion:
        return []
    primes = sorted(prime_factors(G.torsion[-1]))
    generators: dict[int, list[tuple[int, int, int]]] = {}
    for p in primes:
        generators[p] = [
            (i, valuation(tau, p), tau // p ** valuation(tau, p))
            for i, tau in enumerate(G.torsion)
            if tau % p == 0
        ]

    components = []
    for p in primes:
        gens = generators[p]
        linking = [[cofactor_i * cofactor_j * G.linking[i][j] for (j, _, cofactor_j) in gens] for (i, _, cofactor_i) in gens]
        components.append(PrimaryComponent.create(p, [e for _, e, _ in gens], linking))

    for p, q in itertools.combinations(primes, 2):
        for i, _, ci in generators[p]:
            for j, _, cj in generators[q]:
                if not is_integral(ci * cj * G.linking[i][j]):
                    raise ConsistencyError(f"generators for primes {p} and {q} link nontrivially")
    logger.debug("primary decomposition over primes %s", primes)
    return components


def assemble(components: Sequence[PrimaryComponent], free_rank: int = 0) -> LinkedGroup:
    """
    Orthogonal sum of primary components, written on torsion-coefficient
    generators: y_i is the sum over primes of the i-th largest generators,
    aligned from the top.
    """
    t = max((len(c.exponents) for c in components), default=0)
    torsion = [1] * t
    parts: list[list[tuple[PrimaryComponent, int]]] = [[] for _ in range(t)]
    for component in components:
        offset = t - len(component.exponents)
        for k, e in enumerate(component.exponents):
            torsion[offset + k] *= component.prime ** e
            parts[offset + k].append((component, k))
    linking = [[Fraction(0)] * t for _ in range(t)]
    for i in range(t):
        for j in range(t):
            for component, k in parts[i]:
                for other, l in parts[j]:
                    if other is component:
                        linking[i][j] += component.linking[k][l]
    return LinkedGroup.create(free_rank, torsion, linking)


# -- isometries ---------------------------------------------------------------

def isometries(source: FiniteLinking, target: FiniteLinking, node_budget: int | None = None) -> Iterator[IntegerMatrix]:
    """
    Every linking-preserving isomorphism source -> target, as matrices whose
    column i is the image of the i-th source generator.

    A linking-preserving homomorphism out of a nonsingular linking is
    injective, so matching orders make each one bijective.

    Raises:
        SizeLimitError: when node_budget candidate checks are exhausted
    """
    if source.size != target.size:
        return
    settings = get_settings().enumeration
    budget = node_budget if node_budget is not None else settings.isometry_search_nodes
    pool = list(target.enumerate_elements(limit=max(settings.max_enum, settings.isometry_bound)))
    k = len(source.orders)
    images: list[Element] = []
    nodes = 0

    def candidates(i: int) -> Iterator[Element]:
        nonlocal nodes
        order = source.orders[i]
        for x in pool:
            nodes += 1
            if nodes > budget:
                raise SizeLimitError(nodes, budget, "isometry search")
            if any((order * xc) % n for xc, n in zip(x, target.orders)):
                continue
            if target.link(x, x) != source.linking[i][i]:
                continue
            if any(target.link(x, images[j]) != source.linking[i][j] for j in range(i)):
                continue
            yield x

    def extend(i: int) -> Iterator[IntegerMatrix]:
        if i == k:
            yield IntegerMatrix.from_rows([[img[row] for img in images] for row in range(len(target.orders))], cols=k)
            return
        for x in candidates(i):
            images.append(x)
            yield from extend(i + 1)
            images.pop()

    yield from extend(0)


def find_isometry(source: FiniteLinking, target: FiniteLinking, node_budget: int | None = None) -> IntegerMatrix | None:
    return next(isometries(source, target, node_budget=node_budget), None)


def are_isometric(source: FiniteLinking, target: FiniteLinking, node_budget: int | None = None) -> bool:
    """Exhaustive isometry test; groups must lie within the isometry bound."""
    bound = get_settings().enumeration.isometry_bound
    if source.size > bound:
        raise SizeLimitError(source.size, bound, "isometry search")
    return find_isometry(source, target, node_budget=node_budget) is not None


# -- stable classification ----------------------------------------------------

@dataclass(frozen=True)
class StableInvariants:
    """Complete invariants of a linked group up to isomorphism."""

    free_rank: int
    torsion: tuple[int, ...]
    odd: tuple[OddPrimeInvariants, ...]
    two_exponents: tuple[int, ...]
    two_phase: PhaseVector | None


def stable_invariants(G: LinkedGroup) -> StableInvariants:
    """Free rank, torsion coefficients, odd-prime characters and the 2-primary phase vector."""
    from heegaard.classify_odd import seifert_invariants
    from heegaard.classify_two import phase_vector

    odd = []
    two_exponents: tuple[int, ...] = ()
    two_phase = None
    for component in primary_decompose(G):
        if component.prime == 2:
            two_exponents = component.exponents
            two_phase = phase_vector(component)
        else:
            odd.append(seifert_invariants(component))
    return StableInvariants(G.free_rank, G.torsion, tuple(odd), two_exponents, two_phase)


@dataclass(frozen=True)
class Verdict:
    """Outcome of an equivalence decision with the reasons for a negative answer."""

    equivalent: bool
    reasons: tuple[str, ...] = ()
    qualifiers: tuple[str, ...] = ()
    notes: tuple[str, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.equivalent


def compare_invariants(a: StableInvariants, b: StableInvariants) -> list[str]:
    """Human-readable differences between two sets of stable invariants."""
    reasons = []
    if a.free_rank != b.free_rank:
        reasons.append(f"free rank {a.free_rank} vs {b.free_rank}")
    if a.torsion != b.torsion:
        reasons.append(f"torsion {list(a.torsion)} vs {list(b.torsion)}")
        return reasons
    for odd_a, odd_b in zip(a.odd, b.odd):
        if odd_a != odd_b:
            reasons.append(f"p={odd_a.prime} characters {odd_a.characters()} vs {odd_b.characters()}")
    if a.two_phase != b.two_phase:
        reasons.append(f"p=2 phase vectors {a.two_phase} vs {b.two_phase}")
    return reasons


def stable_equivalence(H1: SymplecticMatrix, H2: SymplecticMatrix) -> Verdict:
    """Stable equivalence of two splittings: isomorphic linked quotients."""
    reasons = compare_invariants(stable_invariants(linked_group_of(H1)), stable_invariants(linked_group_of(H2)))
    return Verdict(equivalent=not reasons, reasons=tuple(reasons))
