import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heegaard.errors import NotGeneratingError
from heegaard.linked_group import LinkedGroup, isometries, linked_group_of
from heegaard.matrices import IntegerMatrix
from heegaard.minimal_class import (
    SymmetricLift,
    class_count,
    det_invariant,
    diagonal_representative,
    diagonalize_odd,
    evenness_criteria,
    exterior_det,
    is_diagonal,
    is_even_linking,
    is_unit_volume,
    isometry_determinants,
    minimal_equivalence,
    presentations_equivalent,
    realized_det_values,
    reidemeister_symbols,
    stabilization_relates,
    tau_bar,
)
from heegaard.symplectic import SymplecticMatrix, lens_matrix, lens_sum_matrix, partial_normal_form, stabilize

C8 = LinkedGroup.create(0, [8, 8], [["0", "1/8"], ["1/8", "0"]])
C8_SCALED = LinkedGroup.create(0, [8, 8], [["0", "3/8"], ["3/8", "0"]])


def cyclic(tau: int, numerator: int) -> LinkedGroup:
    return LinkedGroup.create(0, [tau], [[f"{numerator}/{tau}"]])


def test_evenness():
    assert is_even_linking(C8)
    assert tau_bar(C8) == 16
    assert not is_even_linking(cyclic(8, 1))
    assert tau_bar(cyclic(8, 1)) == 8
    assert evenness_criteria(cyclic(5, 1)) == (False, False)
    assert tau_bar(cyclic(5, 2)) == 5
    with pytest.raises(ValueError):
        evenness_criteria(LinkedGroup.create(2, [], []))


def test_evenness_criteria_agree_beyond_enumeration():
    assert evenness_criteria(C8, limit=1) == (True, True)
    assert evenness_criteria(cyclic(4, 1), limit=1) == (False, False)


def test_det_invariant_of_hyperbolic_plane():
    invariant = det_invariant(C8)
    assert (invariant.tau, invariant.tau_bar, invariant.parity, invariant.det_value) == (8, 16, "even", 15)
    assert det_invariant(C8_SCALED).det_value == 7


@pytest.mark.parametrize("numerator", [1, 2, 3, 4])
def test_det_invariant_of_lens_spaces(numerator):
    invariant = det_invariant(cyclic(5, numerator))
    assert (invariant.tau_bar, invariant.parity, invariant.det_value) == (5, "odd", numerator)


def test_det_invariant_ignores_free_part():
    with_free = LinkedGroup.create(2, [8, 8], [["0", "1/8"], ["1/8", "0"]])
    assert det_invariant(with_free) == det_invariant(C8)


def test_det_invariant_needs_torsion():
    with pytest.raises(ValueError):
        det_invariant(LinkedGroup.create(1, [], []))


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_lift_independence(seed):
    for G in (C8, C8_SCALED, cyclic(12, 5), LinkedGroup.create(0, [3, 9], [["1/3", "0"], ["0", "2/9"]])):
        rng = random.Random(seed)
        lift = SymmetricLift.from_linking(G).shifted(rng)
        assert lift.congruent_to(G)
        assert det_invariant(G, rng=rng, lifts=5) == det_invariant(G)


def test_minimal_equivalence_of_u_and_v(splitting):
    verdict = minimal_equivalence(splitting("matrix_u"), splitting("matrix_v"))
    assert not verdict
    assert verdict.reasons == ("det 15 vs 7 mod 16",)
    assert verdict.qualifiers == ()


def test_minimal_equivalence_is_reflexive(splitting):
    for stem in ("matrix_u", "lens52", "identity3"):
        assert minimal_equivalence(splitting(stem), splitting(stem))


def test_lens_spaces_with_inverse_square_parameters(splitting):
    # stably equivalent, but the volume 1 vs 4 mod 5 separates the minimal splittings
    verdict = minimal_equivalence(splitting("lens51"), splitting("lens54"))
    assert not verdict
    assert verdict.reasons == ("det 1 vs 4 mod 5",)
    assert not minimal_equivalence(splitting("lens51"), splitting("lens52"))


def test_minimal_equivalence_of_stabilized_inputs(splitting):
    verdict = minimal_equivalence(stabilize(splitting("lens51"), 1), splitting("lens54"))
    assert verdict
    assert verdict.notes == ("stabilized input: decided up to stabilization",)


def test_bounded_search_qualifier(splitting):
    verdict = minimal_equivalence(splitting("matrix_u"), splitting("matrix_u"), node_budget=3)
    assert verdict
    assert verdict.qualifiers == ("bounded-search",)


def test_isometry_square_law():
    for G in (C8, cyclic(5, 1), cyclic(8, 3), LinkedGroup.create(0, [2, 4], [["1/2", "0"], ["0", "1/4"]])):
        modulus = tau_bar(G)
        for h in isometries(G, G):
            d = h.det()
            assert (d * d - 1) % modulus == 0


def test_isometry_determinants():
    assert isometry_determinants(cyclic(5, 1)) == {1, 4}
    assert isometry_determinants(C8) <= {1, 7}


@pytest.mark.parametrize(
    "G, count",
    [
        (cyclic(5, 1), 2),
        (C8, 2),
        (cyclic(2, 1), 1),
        (cyclic(6, 1), 1),
        (cyclic(7, 3), 3),
        (LinkedGroup.create(3, [], []), 1),
    ],
)
def test_class_count(G, count):
    assert class_count(G) == count
    assert class_count(G, enum_limit=0) == count


@pytest.mark.parametrize("G", [cyclic(5, 1), C8, cyclic(7, 3), cyclic(12, 5), cyclic(9, 2)])
def test_class_count_matches_realized_values(G):
    assert len(realized_det_values(G)) == class_count(G)


def test_reidemeister_symbols():
    symbols = reidemeister_symbols(partial_normal_form(lens_sum_matrix([(2, 1), (4, 1)])))
    assert symbols.as_dict() == {(1, 2): 1}
    assert reidemeister_symbols(partial_normal_form(lens_sum_matrix([(5, 1), (5, 2)]))).symbols == ()
    assert reidemeister_symbols(partial_normal_form(lens_matrix(5, 2))).symbols == ()


def test_reidemeister_symbols_survive_stabilization():
    H = lens_sum_matrix([(3, 1), (9, 2)])
    assert (
        reidemeister_symbols(partial_normal_form(stabilize(H, 2))).as_dict()
        == reidemeister_symbols(partial_normal_form(H)).as_dict()
    )


def test_exterior_det_on_z5():
    identity, doubled = IntegerMatrix.from_rows([[1]]), IntegerMatrix.from_rows([[2]])
    assert exterior_det(identity, [5]) == 1
    assert exterior_det(doubled, [5]) == 2
    assert not presentations_equivalent(identity, doubled, [5])
    assert presentations_equivalent(identity, IntegerMatrix.from_rows([[4]]), [5])


@pytest.mark.parametrize("n, equivalent", [(2, True), (3, True), (4, False), (5, False)])
def test_exterior_det_flips_with_level(n, equivalent):
    torsion = [1 << (n - 1), 1 << n, 1 << n]
    images = IntegerMatrix.from_rows([[1, 2, -2], [1, 1, 0], [1, 0, -1]])
    assert exterior_det(images, torsion) == 3 % torsion[0]
    assert is_unit_volume(exterior_det(images, torsion), torsion[0]) == equivalent
    assert presentations_equivalent(IntegerMatrix.identity(3), images, torsion) == equivalent


def test_exterior_det_rejects_non_generators():
    with pytest.raises(NotGeneratingError):
        exterior_det(IntegerMatrix.from_rows([[5]]), [5])


def test_stabilization_relates_inequivalent_presentations():
    f = IntegerMatrix.from_rows([[3, 5], [1, 2]])
    assert stabilization_relates(IntegerMatrix.from_rows([[1]]), IntegerMatrix.from_rows([[2]]), f, [5])
    assert not stabilization_relates(
        IntegerMatrix.from_rows([[1]]), IntegerMatrix.from_rows([[2]]), IntegerMatrix.from_rows([[2, 0], [0, 1]]), [5]
    )


def test_diagonalize_odd():
    assert diagonalize_odd(cyclic(5, 2)).linking == ((Fraction(2, 5),),)
    hyperbolic = LinkedGroup.create(0, [5, 5], [["0", "1/5"], ["1/5", "0"]])
    diagonal = diagonalize_odd(hyperbolic)
    assert diagonal.linking == ((Fraction(4, 5), 0), (0, Fraction(1, 5)))
    assert diagonal == hyperbolic


def test_diagonalize_mixed_odd_torsion():
    G = LinkedGroup.create(0, [3, 9], [["1/3", "1/3"], ["1/3", "2/9"]])
    diagonal = diagonalize_odd(G)
    assert is_diagonal(diagonal)
    assert diagonal == G
    with pytest.raises(ValueError):
        diagonalize_odd(C8)


def test_diagonal_representative():
    G = LinkedGroup.create(1, [3, 15], [["2/3", "0"], ["0", "7/15"]])
    H = diagonal_representative(G)
    assert isinstance(H, SymplecticMatrix)
    assert linked_group_of(H) == G
    with pytest.raises(ValueError):
        diagonal_representative(C8)
