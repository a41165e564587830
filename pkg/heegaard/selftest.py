"""
Seeded oracle suite: every fast algorithm is checked against an independent
slow one on random instances whose torsion has at most max_size elements.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Callable, List, Optional

from heegaard.classify_odd import odd_equivalent
from heegaard.classify_two import (
    BasicForm,
    component_from_forms,
    gauss_sum_bruteforce,
    gauss_sum_closed_form,
    phase_vector,
    wall_decompose,
)
from heegaard.config import get_settings
from heegaard.errors import HeegaardError, SizeLimitError
from heegaard.linked_group import (
    LinkedGroup,
    PrimaryComponent,
    find_isometry,
    isometries,
    linking_from_normal_form,
    pair_from_matrix,
    primary_decompose,
    quotient_with_linking,
)
from heegaard.matrices import IntegerMatrix, smith_normal_form
from heegaard.minimal_class import tau_bar
from heegaard.symplectic import partial_normal_form, random_symplectic

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    skipped: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class SelftestSummary:
    seed: int
    max_size: int
    results: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def lines(self) -> List[str]:
        out = [f"selftest seed={self.seed} max-size={self.max_size}"]
        for result in self.results:
            status = "ok" if result.passed else "FAILED"
            out.append(f"{result.name}: {result.cases} cases, {result.skipped} skipped, {status}")
            out.extend(f"  {failure}" for failure in result.failures)
        out.append("PASS" if self.passed else "FAIL")
        return out


def _random_groups(rng: random.Random, cases: int, max_size: int) -> List[LinkedGroup]:
    """Linked quotients of random symplectic matrices, torsion of at most max_size elements."""
    groups = []
    attempts = 0
    while len(groups) < cases and attempts < 20 * cases:
        attempts += 1
        H = random_symplectic(rng.randint(1, 3), rng, steps=rng.randint(1, 4))
        G = linking_from_normal_form(partial_normal_form(H))
        if G.torsion and G.size <= max_size:
            groups.append(G)
    return groups


def _random_forms(rng: random.Random, max_size: int) -> List[BasicForm]:
    forms: List[BasicForm] = []
    size = 1
    while True:
        j = rng.randint(1, 4)
        kind = rng.randrange(3)
        form = BasicForm.unary(2 * rng.randrange(1 << (j - 1)) + 1, j) if kind == 0 else (
            BasicForm.binary_c(j) if kind == 1 else BasicForm.binary_d(j)
        )
        grown = size * (1 << (j * form.rank))
        if grown > max_size:
            return forms
        forms.append(form)
        size = grown


def check_smith_form(rng: random.Random, cases: int, max_size: int) -> CheckResult:
    result = CheckResult("smith normal form")
    for _ in range(cases):
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        P = IntegerMatrix.from_rows([[rng.randint(-50, 50) for _ in range(cols)] for _ in range(rows)])
        result.cases += 1
        if not smith_normal_form(P).is_valid_for(P):
            result.failures.append(f"invalid Smith form for {P.tolist()}")
    return result


def check_normal_form(rng: random.Random, cases: int, max_size: int) -> CheckResult:
    result = CheckResult("normal form witnesses")
    for _ in range(cases):
        H = random_symplectic(rng.randint(1, 4), rng, steps=rng.randint(1, 5))
        result.cases += 1
        if not partial_normal_form(H).is_certified():
            result.failures.append(f"uncertified normal form for {H.matrix.tolist()}")
    return result


def check_gauss_sums(rng: random.Random, cases: int, max_size: int) -> CheckResult:
    result = CheckResult("gauss sums closed form vs brute force")
    components: List[PrimaryComponent] = []
    for _ in range(cases):
        forms = _random_forms(rng, max_size)
        if forms:
            components.append(component_from_forms(forms).rebased(rng))
    for G in _random_groups(rng, cases, max_size):
        components.extend(c for c in primary_decompose(G) if c.prime == 2)
    for component in components:
        result.cases += 1
        forms = wall_decompose(component).summands
        for k in range(component.degree + 1):
            if gauss_sum_closed_form(forms, k) != gauss_sum_bruteforce(component, k):
                result.failures.append(f"Gamma_{k} mismatch for {component}")
        phase_vector(component, cross_check=True)
    return result


def check_linking_oracle(rng: random.Random, cases: int, max_size: int) -> CheckResult:
    result = CheckResult("normal-form linking vs lagrangian pair")
    for _ in range(cases):
        H = random_symplectic(rng.randint(1, 3), rng, steps=rng.randint(1, 4))
        G = linking_from_normal_form(partial_normal_form(H))
        if G.size > max_size:
            result.skipped += 1
            continue
        result.cases += 1
        oracle = quotient_with_linking(pair_from_matrix(H))
        if G != oracle:
            result.failures.append(f"invariants differ for {H.matrix.tolist()}")
            continue
        try:
            if find_isometry(oracle.torsion_part(), G.torsion_part()) is None:
                result.failures.append(f"no isometry for {H.matrix.tolist()}")
        except SizeLimitError:
            result.skipped += 1
    return result


def check_odd_characters(rng: random.Random, cases: int, max_size: int) -> CheckResult:
    result = CheckResult("odd characters vs isometry search")
    bound = min(max_size, 2000)
    for _ in range(cases):
        p = rng.choice([3, 5, 7])
        exponents = sorted(rng.choice([1, 1, 2]) for _ in range(rng.randint(1, 3)))
        size = 1
        for e in exponents:
            size *= p ** e
        if size > bound:
            result.skipped += 1
            continue

        def diagonal() -> PrimaryComponent:
            k = len(exponents)
            return PrimaryComponent.create(
                p,
                exponents,
                [[f"{rng.randrange(1, p)}/{p ** exponents[u]}" if u == v else 0 for v in range(k)] for u in range(k)],
            )

        first, second = diagonal().rebased(rng), diagonal().rebased(rng)
        result.cases += 1
        if odd_equivalent(first, second) != (find_isometry(first, second) is not None):
            result.failures.append(f"p={p} exponents {exponents}: characters disagree with the search")
    return result


def check_isometry_squares(rng: random.Random, cases: int, max_size: int) -> CheckResult:
    result = CheckResult("isometry determinants square to one")
    for G in _random_groups(rng, cases, min(max_size, 64)):
        if G.t > 2:
            result.skipped += 1
            continue
        result.cases += 1
        modulus = tau_bar(G)
        try:
            for h in isometries(G.torsion_part(), G.torsion_part()):
                d = h.det()
                if (d * d - 1) % modulus:
                    result.failures.append(f"isometry with det {d} of torsion {list(G.torsion)}")
                    break
        except SizeLimitError:
            result.skipped += 1
    return result


CHECKS: List[Callable[[random.Random, int, int], CheckResult]] = [
    check_smith_form,
    check_normal_form,
    check_gauss_sums,
    check_linking_oracle,
    check_odd_characters,
    check_isometry_squares,
]


def run_selftest(max_size: Optional[int] = None, seed: Optional[int] = None, cases: Optional[int] = None) -> SelftestSummary:
    """
    Run every oracle check with a fixed seed; max_size = 0 runs nothing.

    Errors raised by the library inside a check are recorded as failures.
    """
    settings = get_settings().selftest
    max_size = settings.max_size if max_size is None else max_size
    seed = settings.seed if seed is None else seed
    cases = settings.cases if cases is None else cases
    results = []
    if max_size > 0:
        for check in CHECKS:
            rng = random.Random(f"{seed}:{check.__name__}")
            try:
                results.append(check(rng, cases, max_size))
            except HeegaardError as e:
                logger.debug("check %s raised %s", check.__name__, e)
                results.append(CheckResult(check.__name__, failures=[f"{type(e).__name__}: {e}"]))
    return SelftestSummary(seed, max_size, results)
