"""
Linked 2-groups: Wall decomposition into basic forms, Burger counts, Gauss
sums in the cyclotomic ring and the mod-8 phase vector.

Basic forms are the unary forms (a/2^j) with a odd and the binary forms
C/2^j and D/2^j with C = [[0, 1], [1, 0]] and D = [[2, 1], [1, 2]].
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from heegaard.cyclotomic import CyclotomicElement, exp_2pi_i, rho, root_of_unity, sqrt2_power
from heegaard.errors import ConsistencyError, InvalidLinkingError
from heegaard.linked_group import PrimaryComponent
from heegaard.matrices import IntegerMatrix
from heegaard.numtheory import epsilon, hensel_lift, mod_inverse

logger = logging.getLogger(__name__)

INFINITY = math.inf
Phase = int | float


class FormKind(str, Enum):
    UNARY = "unary"
    C = "C"
    D = "D"


@dataclass(frozen=True, order=True)
class BasicForm:
    """
    A basic linking form on Z/2^j (unary) or (Z/2^j)^2 (binary).

    For unary forms a is the odd numerator in [1, 2^j); binary forms carry a = 0.
    """

    j: int
    kind: FormKind
    a: int = 0

    def __post_init__(self):
        if self.j < 1:
            raise InvalidLinkingError(f"basic forms need level j >= 1, got {self.j}")
        if self.kind is FormKind.UNARY:
            if self.a % 2 == 0:
                raise InvalidLinkingError(f"unary numerator must be odd, got {self.a}")
            object.__setattr__(self, "a", self.a % (1 << self.j))
        elif self.a:
            raise InvalidLinkingError("binary forms carry no numerator")

    @classmethod
    def unary(cls, a: int, j: int) -> BasicForm:
        return cls(j, FormKind.UNARY, a)

    @classmethod
    def binary_c(cls, j: int) -> BasicForm:
        return cls(j, FormKind.C)

    @classmethod
    def binary_d(cls, j: int) -> BasicForm:
        return cls(j, FormKind.D)

    @property
    def rank(self) -> int:
        return 1 if self.kind is FormKind.UNARY else 2

    def matrix(self) -> list[list[Fraction]]:
        scale = Fraction(1, 1 << self.j)
        if self.kind is FormKind.UNARY:
            return [[self.a * scale]]
        diagonal = 0 if self.kind is FormKind.C else 2
        return [[diagonal * scale, scale], [scale, diagonal * scale]]

    def __str__(self) -> str:
        if self.kind is FormKind.UNARY:
            return f"({self.a}/{1 << self.j})"
        return f"{self.kind.value}/{1 << self.j}"


def component_from_forms(forms: Iterable[BasicForm]) -> PrimaryComponent:
    """The orthogonal sum of basic forms as a 2-primary component, summands ordered by level."""
    ordered = sorted(forms)
    exponents = [form.j for form in ordered for _ in range(form.rank)]
    size = len(exponents)
    linking = [[Fraction(0)] * size for _ in range(size)]
    offset = 0
    for form in ordered:
        block = form.matrix()
        for u in range(form.rank):
            for v in range(form.rank):
                linking[offset + u][offset + v] = block[u][v]
        offset += form.rank
    return PrimaryComponent.create(2, exponents, linking)


@dataclass(frozen=True)
class WallDecomposition:
    """
    Summands and the change of basis realizing them.

    Row i of witness holds the coordinates (in the component's generators) of
    the i-th new generator; the summands use the new generators in order.
    """

    summands: tuple[BasicForm, ...]
    witness: IntegerMatrix

    def ranks(self) -> Counter:
        counts: Counter = Counter()
        for form in self.summands:
            counts[form.j] += form.rank
        return counts

    def has_unary(self) -> bool:
        return any(form.kind is FormKind.UNARY for form in self.summands)


@dataclass(frozen=True)
class PhaseVector:
    """Phases (phi_n, ..., phi_1) in Z/8, with math.inf where the Gauss sum vanishes."""

    degree: int
    entries: tuple[Phase, ...]

    def phase(self, k: int) -> Phase:
        return self.entries[self.degree - k]

    def as_strings(self) -> list[str]:
        return [format_phase(x) for x in self.entries]

    def __str__(self) -> str:
        return "(" + ", ".join(self.as_strings()) + ")"


def format_phase(value: Phase) -> str:
    return "inf" if value == INFINITY else str(int(value))


def parse_phase(value: str | int | float) -> Phase:
    if value in ("inf", "∞") or value == INFINITY:
        return INFINITY
    return int(value) % 8


def phase_add(x: Phase, y: Phase) -> Phase:
    if x == INFINITY or y == INFINITY:
        return INFINITY
    return (int(x) + int(y)) % 8


# -- Burger counts and Gauss sums ----------------------------------------------

def burger_counts(component: PrimaryComponent, limit: int | None = None) -> dict[Fraction, int]:
    """
    N_a = #{x : linking(x, x) = a} for every value a, by full enumeration.

    Raises:
        SizeLimitError: if the group exceeds the enumeration bound
    """
    counts: Counter = Counter()
    for x in component.enumerate_elements(limit=limit):
        counts[component.self_link(x)] += 1
    return dict(sorted(counts.items()))


def gauss_level(degree: int) -> int:
    return max(degree, 3)


def gauss_sum_bruteforce(component: PrimaryComponent, k: int, limit: int | None = None) -> CyclotomicElement:
    """Gamma_k = sum over x of E(2^k linking(x, x)), summed element by element."""
    level = gauss_level(component.degree)
    modulus = 1 << level
    tally = [0] * modulus
    for x in component.enumerate_elements(limit=limit):
        value = (1 << k) * component.self_link(x)
        tally[(value * modulus).numerator % modulus] += 1
    total = CyclotomicElement.zero(level)
    for e, count in enumerate(tally):
        if count:
            total = total + root_of_unity(e, level) * count
    return total


def gauss_sum_from_counts(counts: dict[Fraction, int], k: int, degree: int) -> CyclotomicElement:
    """Gamma_k = sum over a of N_a E(2^k a)."""
    level = gauss_level(degree)
    total = CyclotomicElement.zero(level)
    for value, count in counts.items():
        total = total + exp_2pi_i(((1 << k) * value) % 1, level) * count
    return total


def _basic_gauss_sum(form: BasicForm, k: int, level: int) -> CyclotomicElement:
    j = form.j
    if form.kind is FormKind.UNARY:
        if k >= j:
            return CyclotomicElement.from_int(1 << j, level)
        if k == j - 1:
            return CyclotomicElement.zero(level)
        power = sqrt2_power(j + k + 1, level)
        if (j - k) % 2 == 0:
            return power * rho(level) ** epsilon(form.a)
        return power * rho(level) ** (form.a % 8)
    if k >= j - 1:
        return CyclotomicElement.from_int(1 << (2 * j), level)
    value = 1 << (j + k + 1)
    if form.kind is FormKind.D and (j + k + 1) % 2:
        value = -value
    return CyclotomicElement.from_int(value, level)


def gauss_sum_closed_form(forms: Sequence[BasicForm], k: int) -> CyclotomicElement:
    """Gamma_k of an orthogonal sum as the product of the basic-form Gauss sums."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    level = gauss_level(max((form.j for form in forms), default=0))
    total = CyclotomicElement.from_int(1, level)
    for form in forms:
        total = total * _basic_gauss_sum(form, k, level)
    return total


def phase_from_gauss_sum(gamma: CyclotomicElement) -> Phase:
    """
    The phase phi with gamma = (sqrt 2)^p rho^phi, or inf for gamma = 0.

    Raises:
        ConsistencyError: if gamma is not of that shape
    """
    if gamma.is_zero():
        return INFINITY
    norm = (gamma * gamma.conj()).rational_value()
    if norm is None or norm <= 0 or norm & (norm - 1):
        raise ConsistencyError(f"|Gamma|^2 = {norm} is not a power of two")
    level = gauss_level(gamma.level)
    magnitude = sqrt2_power(norm.bit_length() - 1, level)
    base = rho(level)
    for phi in range(8):
        if magnitude * base ** phi == gamma:
            return phi
    raise ConsistencyError(f"{gamma} is not a power of two times a power of E(1/8)")


def magnitude_exponent(ranks: dict[int, int], k: int) -> int:
    """p_k with |Gamma_k|^2 = 2^p_k whenever Gamma_k is nonzero; depends on the ranks alone."""
    return sum(2 * j * r if j <= k + 1 else (j + k + 1) * r for j, r in ranks.items())


# -- Wall decomposition ---------------------------------------------------------

class _Basis:
    """Working basis in generator coordinates with the orders of its vectors."""

    def __init__(self, component: PrimaryComponent):
        self.component = component
        size = len(component.exponents)
        self.vectors = [tuple(int(i == u) for i in range(size)) for u in range(size)]
        self.exponents = list(component.exponents)

    def normalize(self, vector: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % n for x, n in zip(vector, self.component.orders))

    def combine(self, *terms: tuple[int, Sequence[int]]) -> tuple[int, ...]:
        size = len(self.component.exponents)
        return self.normalize([sum(c * v[i] for c, v in terms) for i in range(size)])

    def scaled(self, x: Sequence[int], y: Sequence[int], level: int) -> int:
        """2^level * linking(x, y) as an integer mod 2^level."""
        value = (1 << level) * self.component.link(x, y)
        if value.denominator != 1:
            raise ConsistencyError(f"linking value {value} exceeds level {level}")
        return value.numerator

    def take(self, *indices: int) -> None:
        for i in sorted(indices, reverse=True):
            del self.vectors[i]
            del self.exponents[i]


def _orthogonalize_unary(basis: _Basis, x: tuple[int, ...], a: int, n: int) -> None:
    modulus = 1 << n
    a_inv = mod_inverse(a, modulus)
    for i, z in enumerate(basis.vectors):
        b = basis.scaled(z, x, n)
        basis.vectors[i] = basis.combine((1, z), (-(b * a_inv) % modulus, x))


def _orthogonalize_binary(basis: _Basis, x: tuple[int, ...], y: tuple[int, ...], m2: int, n2: int, n: int) -> None:
    """Make every remaining vector orthogonal to the plane with Gram matrix [[m2, 1], [1, n2]] / 2^n."""
    modulus = 1 << n
    det_inv = mod_inverse(m2 * n2 - 1, modulus)
    for i, z in enumerate(basis.vectors):
        p = basis.scaled(z, x, n)
        q = basis.scaled(z, y, n)
        alpha = -det_inv * (n2 * p - q) % modulus
        beta = -det_inv * (m2 * q - p) % modulus
        basis.vectors[i] = basis.combine((1, z), (alpha, x), (beta, y))


def _classify_plane(basis: _Basis, x: tuple[int, ...], y: tuple[int, ...], j: int) -> tuple[BasicForm, list[tuple[int, ...]]]:
    """
    Rewrite a plane with Gram matrix [[2m, 1], [1, 2n]] / 2^j as C or D.

    C when m or n is even: a root of n a^2 + a + m makes v = x + a y isotropic.
    D when both are odd: a root of n a^2 + a + m - 1 gives v with linking(v, v) = 2/2^j,
    and a second Hensel root c places w = c v + (1 - 2c) y' on the same footing.
    """
    modulus = 1 << j
    m = basis.scaled(x, x, j) // 2
    n = basis.scaled(y, y, j) // 2

    if m % 2 == 0 or n % 2 == 0:
        root = m % 2 if n % 2 == 0 else 0
        a = hensel_lift((n, 1, m), 2, j, root)
        v = basis.combine((1, x), (a, y))
        u_inv = mod_inverse(1 + 2 * a * n, modulus)
        w = basis.combine((u_inv, y))
        k = basis.scaled(w, w, j) // 2
        w = basis.combine((1, w), (-k, v))
        return BasicForm.binary_c(j), [v, w]

    a = hensel_lift((n, 1, m - 1), 2, j, 0)
    v = basis.combine((1, x), (a, y))
    u_inv = mod_inverse(1 + 2 * a * n, modulus)
    y_scaled = basis.combine((u_inv, y))
    n_scaled = basis.scaled(y_scaled, y_scaled, j) // 2
    c = hensel_lift((4 * n_scaled - 1, 1 - 4 * n_scaled, n_scaled - 1), 2, j, 1)
    w = basis.combine((c, v), (1 - 2 * c, y_scaled))
    return BasicForm.binary_d(j), [v, w]


def wall_decompose(component: PrimaryComponent) -> WallDecomposition:
    """
    Split a linked 2-group into basic forms, top level first.

    Unary summands are split off whenever a remaining generator of top order
    has odd self-linking numerator; otherwise a hyperbolic pair of top-order
    generators spans a binary plane, which is then classified as C or D.

    A top block whose generators all have even self-linking is never searched
    for a unary summand among sums of generator pairs: such a sum x + y has
    self-linking 2 linking(x, y) plus two even terms, so it is even as well.
    The plane is rewritten directly by _classify_plane, whose Hensel roots
    give the C or D basis, and the witness check below confirms the result.

    Raises:
        ValueError: for components of odd primes
        ConsistencyError: if the witness does not reproduce the block-diagonal linking
    """
    if component.prime != 2:
        raise ValueError("wall decomposition needs a 2-primary component")
    basis = _Basis(component)
    summands: list[BasicForm] = []
    rows: list[tuple[int, ...]] = []

    while basis.vectors:
        n = max(basis.exponents)
        top = [i for i, e in enumerate(basis.exponents) if e == n]
        unary = next((i for i in top if basis.scaled(basis.vectors[i], basis.vectors[i], n) % 2), None)
        if unary is not None:
            x = basis.vectors[unary]
            a = basis.scaled(x, x, n)
            basis.take(unary)
            _orthogonalize_unary(basis, x, a, n)
            summands.append(BasicForm.unary(a, n))
            rows.append(x)
            continue

        pair = next(
            ((u, v) for u in top for v in top if u < v and basis.scaled(basis.vectors[u], basis.vectors[v], n) % 2),
            None,
        )
        if pair is None:
            raise ConsistencyError(f"top block of level {n} is degenerate mod 2")
        u, v = pair
        x = basis.vectors[u]
        b = basis.scaled(x, basis.vectors[v], n)
        y = basis.combine((mod_inverse(b, 1 << n), basis.vectors[v]))
        basis.take(u, v)
        _orthogonalize_binary(basis, x, y, basis.scaled(x, x, n), basis.scaled(y, y, n), n)
        form, plane = _classify_plane(basis, x, y, n)
        summands.append(form)
        rows.extend(plane)

    size = len(component.exponents)
    witness = IntegerMatrix.from_rows(rows, cols=size)
    result = WallDecomposition(tuple(summands), witness)
    _verify_witness(component, result)
    logger.debug("wall decomposition: %s", [str(form) for form in summands])
    return result


def _verify_witness(component: PrimaryComponent, decomposition: WallDecomposition) -> None:
    rows = decomposition.witness.tolist()
    expected = component_block_diagonal(decomposition.summands)
    if component.gram(rows) != expected:
        raise ConsistencyError("wall witness does not transport the linking to the block-diagonal sum")
    if decomposition.ranks() != Counter(component.exponents):
        raise ConsistencyError("wall summands do not match the ranks of the input group")


def component_block_diagonal(forms: Sequence[BasicForm]) -> list[list[Fraction]]:
    """Block-diagonal matrix of the forms in the given order, entries in [0, 1)."""
    size = sum(form.rank for form in forms)
    out = [[Fraction(0)] * size for _ in range(size)]
    offset = 0
    for form in forms:
        block = form.matrix()
        for u in range(form.rank):
            for v in range(form.rank):
                out[offset + u][offset + v] = block[u][v] % 1
        offset += form.rank
    return out


# -- phases ----------------------------------------------------------------------

def basic_phase(form: BasicForm, k: int) -> Phase:
    """phi_k of a single basic form."""
    j = form.j
    if form.kind is FormKind.UNARY:
        if k > j:
            return 0
        if k == j:
            return INFINITY
        return epsilon(form.a) if (j - k) % 2 else form.a % 8
    if form.kind is FormKind.C or k >= j:
        return 0
    return 4 * (j + k) % 8


def phase_vector_of_forms(forms: Sequence[BasicForm], degree: int) -> PhaseVector:
    entries = []
    for k in range(degree, 0, -1):
        total: Phase = 0
        for form in forms:
            total = phase_add(total, basic_phase(form, k))
        entries.append(total)
    return PhaseVector(degree, tuple(entries))


def phase_vector(component: PrimaryComponent, cross_check: bool = False, limit: int | None = None) -> PhaseVector:
    """
    Phase vector from the Wall decomposition.

    With cross_check, every entry is recomputed from the brute-force Gauss sum.

    Raises:
        SizeLimitError: on the cross-check path only
        ConsistencyError: if the two computations disagree
    """
    decomposition = wall_decompose(component)
    vector = phase_vector_of_forms(decomposition.summands, component.degree)
    if cross_check:
        for k in range(1, component.degree + 1):
            brute = phase_from_gauss_sum(gauss_sum_bruteforce(component, k - 1, limit=limit))
            if brute != vector.phase(k):
                raise ConsistencyError(f"phase {k}: table gives {vector.phase(k)}, Gauss sum gives {brute}")
    return vector


def two_equivalent(first: PrimaryComponent, second: PrimaryComponent) -> bool:
    if first.prime != 2 or second.prime != 2 or first.exponents != second.exponents:
        return False
    return phase_vector(first) == phase_vector(second)


def is_even_form(component: PrimaryComponent) -> bool:
    """True when the Wall decomposition has no unary summand."""
    return not wall_decompose(component).has_unary()


def element_order(component: PrimaryComponent, x: Sequence[int]) -> int:
    order = 1
    for xi, n in zip(x, component.orders):
        order = max(order, n // math.gcd(xi, n))
    return order


def is_even_by_enumeration(component: PrimaryComponent, limit: int | None = None) -> bool:
    """Every x of order 2^j has linking(x, x) in the subgroup generated by 2/2^j."""
    for x in component.enumerate_elements(limit=limit):
        value = element_order(component, x) * component.self_link(x)
        if value.numerator % 2:
            return False
    return True
