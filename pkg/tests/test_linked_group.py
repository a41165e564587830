import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heegaard.errors import InvalidLinkingError, SizeLimitError
from heegaard.linked_group import (
    HeegaardPair,
    LinkedGroup,
    PrimaryComponent,
    are_isometric,
    assemble,
    find_isometry,
    isometries,
    linked_group_of,
    pair_from_matrix,
    primary_decompose,
    quotient_with_linking,
    stable_equivalence,
    stable_invariants,
)
from heegaard.matrices import IntegerMatrix
from heegaard.symplectic import SymplecticMatrix, lens_matrix, lens_sum_matrix, random_symplectic


def test_linking_of_lens_space():
    G = linked_group_of(lens_matrix(5, 2))
    assert G.torsion == (5,)
    assert G.linking_strings() == [["2/5"]]
    assert G.free_rank == 0


def test_linking_of_matrix_u(splitting):
    G = linked_group_of(splitting("matrix_u"))
    assert G.torsion == (8, 8)
    assert G.linking == ((0, Fraction(1, 8)), (Fraction(1, 8), 0))


def test_linking_of_matrix_v(splitting):
    G = linked_group_of(splitting("matrix_v"))
    assert G.linking_strings() == [["0/1", "3/8"], ["3/8", "0/1"]]


def test_identity_has_free_quotient():
    G = linked_group_of(SymplecticMatrix.identity(3))
    assert (G.free_rank, G.torsion) == (3, ())


@pytest.mark.parametrize(
    "torsion, linking, message",
    [
        ([5], [["1/3"]], "incompatible"),
        ([5], [["0"]], "singular"),
        ([4, 6], [["1/4", "0"], ["0", "1/6"]], "divide"),
        ([5, 5], [["1/5", "1/5"], ["2/5", "1/5"]], "symmetric"),
        ([1], [["0"]], ">= 2"),
    ],
)
def test_invalid_linked_groups(torsion, linking, message):
    with pytest.raises(InvalidLinkingError, match=message):
        LinkedGroup.create(0, torsion, linking)


def test_equality_is_isomorphism():
    first = LinkedGroup.create(0, [5], [["1/5"]])
    second = LinkedGroup.create(0, [5], [["4/5"]])
    third = LinkedGroup.create(0, [5], [["2/5"]])
    assert first == second
    assert not first.structurally_equal(second)
    assert first != third


def test_from_dict_reduces_entries():
    G = LinkedGroup.from_dict({"rank": 1, "torsion": [3], "linking": [["-1/3"]]})
    assert G.linking == ((Fraction(2, 3),),)
    assert G.free_rank == 1


def test_enumeration_limit():
    G = LinkedGroup.create(0, [8, 8], [["0", "1/8"], ["1/8", "0"]])
    with pytest.raises(SizeLimitError):
        list(G.enumerate_elements(limit=10))
    assert len(list(G.enumerate_elements())) == 64


def test_lagrangian_pair_validation():
    with pytest.raises(InvalidLinkingError, match="summand"):
        HeegaardPair(1, IntegerMatrix.from_rows([[2], [0]]))
    with pytest.raises(InvalidLinkingError, match="isotropic"):
        HeegaardPair(2, IntegerMatrix.from_rows([[1, 0], [0, 0], [0, 1], [0, 0]]))


def test_lagrangian_pair_oracle_on_lens_space():
    oracle = quotient_with_linking(pair_from_matrix(lens_matrix(7, 3)))
    G = linked_group_of(lens_matrix(7, 3))
    assert oracle.torsion == (7,)
    assert oracle == G
    assert find_isometry(oracle, G) is not None


@given(st.integers(1, 3), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_both_linking_computations_agree(genus, seed):
    H = random_symplectic(genus, random.Random(seed), steps=3)
    G = linked_group_of(H)
    oracle = quotient_with_linking(pair_from_matrix(H))
    assert (oracle.free_rank, oracle.torsion) == (G.free_rank, G.torsion)
    assert stable_invariants(oracle) == stable_invariants(G)


def test_primary_decomposition_of_z6():
    G = LinkedGroup.create(0, [6], [["1/6"]])
    two, three = primary_decompose(G)
    assert (two.prime, two.exponents, two.linking) == (2, (1,), ((Fraction(1, 2),),))
    assert (three.prime, three.exponents, three.linking) == (3, (1,), ((Fraction(2, 3),),))
    assert assemble([two, three]) == G


def test_primary_component_blocks():
    component = PrimaryComponent.create(3, [1, 2, 2], [["1/3", 0, 0], [0, "1/9", 0], [0, 0, "2/9"]])
    assert component.blocks() == [(1, [0]), (2, [1, 2])]
    assert component.rank_at(2) == 2
    assert component.degree == 2
    with pytest.raises(InvalidLinkingError):
        PrimaryComponent.create(3, [2, 1], [["1/9", 0], [0, "1/3"]])


def test_isometries_of_z5():
    one = LinkedGroup.create(0, [5], [["1/5"]])
    four = LinkedGroup.create(0, [5], [["4/5"]])
    two = LinkedGroup.create(0, [5], [["2/5"]])
    assert {h[0, 0] for h in isometries(one, four)} == {2, 3}
    assert are_isometric(one, four)
    assert not are_isometric(one, two)


def test_isometry_budget():
    G = LinkedGroup.create(0, [8, 8], [["0", "1/8"], ["1/8", "0"]])
    with pytest.raises(SizeLimitError):
        list(isometries(G, G, node_budget=5))


def test_stable_equivalence_examples(splitting):
    assert stable_equivalence(splitting("matrix_u"), splitting("matrix_v"))
    verdict = stable_equivalence(splitting("lens51"), splitting("lens52"))
    assert not verdict
    assert verdict.reasons == ("p=5 characters [1] vs [-1]",)
    assert stable_equivalence(splitting("lens51"), splitting("lens54"))


def test_stable_equivalence_detects_group_changes():
    verdict = stable_equivalence(lens_sum_matrix([(3, 1), (3, 1)]), lens_sum_matrix([(1, 0), (9, 1)]))
    assert not verdict
    assert verdict.reasons[0].startswith("torsion")
