import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from heegaard.classify_two import (
    INFINITY,
    BasicForm,
    FormKind,
    burger_counts,
    component_from_forms,
    format_phase,
    gauss_sum_bruteforce,
    gauss_sum_closed_form,
    gauss_sum_from_counts,
    is_even_by_enumeration,
    is_even_form,
    magnitude_exponent,
    parse_phase,
    phase_add,
    phase_from_gauss_sum,
    phase_vector,
    two_equivalent,
    wall_decompose,
)
from heegaard.cyclotomic import CyclotomicElement, rho, sqrt2_power
from heegaard.errors import ConsistencyError, InvalidLinkingError
from heegaard.linked_group import PrimaryComponent, find_isometry

U, C, D = BasicForm.unary, BasicForm.binary_c, BasicForm.binary_d


def forms_strategy(max_size=256):
    form = st.one_of(
        st.builds(lambda j, a: U(2 * a + 1, j), st.integers(1, 4), st.integers(0, 7)),
        st.builds(C, st.integers(1, 3)),
        st.builds(D, st.integers(1, 3)),
    )
    return st.lists(form, min_size=1, max_size=3).filter(
        lambda forms: component_from_forms(forms).size <= max_size
    )


def test_basic_forms():
    assert str(U(3, 3)) == "(3/8)"
    assert str(C(2)) == "C/4"
    assert str(D(3)) == "D/8"
    assert U(-3, 2).a == 1
    assert D(2).matrix() == [[Fraction(2, 4), Fraction(1, 4)], [Fraction(1, 4), Fraction(2, 4)]]
    with pytest.raises(InvalidLinkingError):
        U(2, 3)
    with pytest.raises(InvalidLinkingError):
        BasicForm(2, FormKind.C, 1)


def test_burger_counts():
    assert burger_counts(component_from_forms([U(1, 1)])) == {Fraction(0): 1, Fraction(1, 2): 1}
    assert burger_counts(component_from_forms([U(1, 2)])) == {Fraction(0): 2, Fraction(1, 4): 2}
    assert burger_counts(component_from_forms([C(1)])) == {Fraction(0): 4}


def test_gauss_sums_of_cyclic_forms():
    assert gauss_sum_bruteforce(component_from_forms([U(1, 1)]), 0).is_zero()
    assert gauss_sum_bruteforce(component_from_forms([U(1, 2)]), 0) == sqrt2_power(3) * rho()
    assert gauss_sum_bruteforce(component_from_forms([U(1, 3)]), 0) == rho() * 4


def test_closed_form_table():
    assert gauss_sum_closed_form([U(1, 2)], 0) == sqrt2_power(3) * rho()
    assert gauss_sum_closed_form([C(3)], 2) == 1 << 6
    assert gauss_sum_closed_form([D(2)], 0) == -8
    assert gauss_sum_closed_form([C(2)], 0) == 8
    assert gauss_sum_closed_form([], 0) == 1
    with pytest.raises(ValueError):
        gauss_sum_closed_form([C(1)], -1)


def test_binary_planes_classified_by_gauss_sums():
    # C/4 and D/4 differ exactly in the sign of Gamma_0
    c_plane = PrimaryComponent.create(2, [2, 2], [["0", "1/4"], ["1/4", "0"]])
    d_plane = PrimaryComponent.create(2, [2, 2], [["1/2", "1/4"], ["1/4", "1/2"]])
    assert wall_decompose(c_plane).summands == (C(2),)
    assert wall_decompose(d_plane).summands == (D(2),)
    assert gauss_sum_bruteforce(c_plane, 0) == 8
    assert gauss_sum_bruteforce(d_plane, 0) == -8


def test_wall_decomposition_of_mixed_example():
    component = PrimaryComponent.create(2, [2, 3, 3], [["-3/4", 0, 0], [0, "2/8", "1/8"], [0, "1/8", "2/8"]])
    decomposition = wall_decompose(component)
    assert sorted(decomposition.summands) == sorted([U(1, 2), D(3)])
    assert decomposition.has_unary()
    assert decomposition.ranks() == {2: 1, 3: 2}
    twin = component_from_forms([U(1, 2), C(3)])
    assert two_equivalent(component, twin)
    assert phase_vector(component).entries == (0, INFINITY, 1)


def test_wall_decomposition_rejects_odd_primes():
    with pytest.raises(ValueError):
        wall_decompose(PrimaryComponent.create(3, [1], [["1/3"]]))


@pytest.mark.parametrize(
    "forms, expected",
    [
        ([U(1, 4), U(3, 3)], (INFINITY, INFINITY, 0, 4)),
        ([U(1, 5), U(3, 4)], (INFINITY, INFINITY, 0, 4, 0)),
        ([U(3, 4), U(1, 3)], (INFINITY, INFINITY, 4, 0)),
        ([U(1, 5), U(3, 4), U(5, 3)], (INFINITY, INFINITY, INFINITY, 5, 5)),
        ([U(3, 5), U(5, 4), U(1, 3)], (INFINITY, INFINITY, INFINITY, 5, 5)),
        ([U(5, 5), U(1, 4), U(3, 3)], (INFINITY, INFINITY, INFINITY, 1, 1)),
        ([C(3)], (0, 0, 0)),
        ([D(2)], (0, 4)),
    ],
)
def test_phase_vectors(forms, expected):
    vector = phase_vector(component_from_forms(forms), cross_check=True)
    assert vector.entries == expected


def test_phase_vectors_separate_forms():
    first = component_from_forms([U(1, 4), U(3, 3)])
    second = component_from_forms([U(3, 4), U(1, 3)])
    assert not two_equivalent(first, second)
    assert two_equivalent(first, first)


def test_phase_helpers():
    assert format_phase(INFINITY) == "inf"
    assert parse_phase("inf") == INFINITY
    assert parse_phase(11) == 3
    assert phase_add(5, 7) == 4
    assert phase_add(INFINITY, 3) == INFINITY
    assert str(phase_vector(component_from_forms([U(1, 2)]))) == "(inf, 1)"


def test_phase_of_non_phase_element():
    with pytest.raises(ConsistencyError):
        phase_from_gauss_sum(CyclotomicElement.from_int(3, 3))


def test_evenness():
    assert is_even_form(component_from_forms([C(3)]))
    assert is_even_form(component_from_forms([D(1), C(2)]))
    assert not is_even_form(component_from_forms([U(1, 1), C(2)]))


@given(forms_strategy())
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
def test_closed_form_matches_brute_force(forms):
    component = component_from_forms(forms)
    summands = wall_decompose(component).summands
    counts = burger_counts(component)
    for k in range(component.degree + 1):
        brute = gauss_sum_bruteforce(component, k)
        assert gauss_sum_closed_form(summands, k) == brute
        assert gauss_sum_closed_form(forms, k) == brute
        assert gauss_sum_from_counts(counts, k, component.degree) == brute


@given(forms_strategy())
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
def test_magnitude_law(forms):
    component = component_from_forms(forms)
    ranks = wall_decompose(component).ranks()
    for k in range(component.degree):
        gamma = gauss_sum_closed_form(forms, k)
        if not gamma.is_zero():
            assert gamma * gamma.conj() == 1 << magnitude_exponent(ranks, k)


@given(forms_strategy(), forms_strategy())
@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
def test_phase_vectors_are_additive(first, second):
    degree = max(component_from_forms(first + second).degree, 1)
    whole = phase_vector(component_from_forms(first + second))
    left, right = phase_vector(component_from_forms(first)), phase_vector(component_from_forms(second))
    for k in range(1, degree + 1):
        lk = left.phase(k) if k <= left.degree else 0
        rk = right.phase(k) if k <= right.degree else 0
        assert whole.phase(k) == phase_add(lk, rk)


@given(forms_strategy(64))
@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
def test_evenness_by_enumeration(forms):
    component = component_from_forms(forms)
    assert is_even_form(component) == is_even_by_enumeration(component)


def _agrees_with_search(first, second):
    if first.size <= 512:
        assert two_equivalent(first, second) == (find_isometry(first, second) is not None)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_unary_plus_c_matches_unary_plus_d(n):
    with_c = component_from_forms([U(1, n - 1), C(n)])
    with_d = PrimaryComponent.create(
        2,
        [n - 1, n, n],
        [[f"-3/{1 << (n - 1)}", 0, 0], [0, f"2/{1 << n}", f"1/{1 << n}"], [0, f"1/{1 << n}", f"2/{1 << n}"]],
    )
    expected = (0, INFINITY) + (1,) * (n - 2)
    assert phase_vector(with_c).entries == expected
    assert phase_vector(with_d).entries == expected
    assert two_equivalent(with_c, with_d)
    _agrees_with_search(with_c, with_d)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_swapped_unary_pairs_are_separated(n):
    first = component_from_forms([U(1, n), U(3, n - 1)])
    second = component_from_forms([U(3, n), U(1, n - 1)])
    tail_first = tuple(0 if i % 2 == 0 else 4 for i in range(n - 2))
    tail_second = tuple(4 if i % 2 == 0 else 0 for i in range(n - 2))
    assert phase_vector(first, cross_check=True).entries == (INFINITY, INFINITY) + tail_first
    assert phase_vector(second, cross_check=True).entries == (INFINITY, INFINITY) + tail_second
    assert not two_equivalent(first, second)
    _agrees_with_search(first, second)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_unary_triples(n):
    first = component_from_forms([U(1, n), U(3, n - 1), U(5, n - 2)])
    second = component_from_forms([U(3, n), U(5, n - 1), U(1, n - 2)])
    third = component_from_forms([U(5, n), U(1, n - 1), U(3, n - 2)])
    head = (INFINITY,) * 3
    assert phase_vector(first).entries == head + (5,) * (n - 3)
    assert phase_vector(second).entries == head + (5,) * (n - 3)
    assert phase_vector(third).entries == head + (1,) * (n - 3)
    assert two_equivalent(first, second)
    assert two_equivalent(first, third) == (n == 3)
    _agrees_with_search(first, second)
    _agrees_with_search(first, third)


@given(forms_strategy(64), st.integers(0, 10_000))
@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
def test_phase_vector_survives_change_of_generators(forms, seed):
    component = component_from_forms(forms)
    moved = component.rebased(random.Random(seed))
    assert phase_vector(moved, cross_check=True) == phase_vector(component)
    assert find_isometry(component, moved) is not None
