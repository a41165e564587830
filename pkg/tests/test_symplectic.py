import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heegaard.errors import DimensionError, NotSymplecticError
from heegaard.matrices import IntegerMatrix
from heegaard.symplectic import (
    SymplecticMatrix,
    in_handlebody_subgroup,
    is_stabilized,
    lens_matrix,
    lens_sum_matrix,
    minimal_genus,
    omega,
    partial_normal_form,
    random_handlebody_element,
    random_symplectic,
    related_representatives,
    sigma,
    stabilize,
    validate_symplectic,
)


def test_accepts_j_and_identity():
    assert validate_symplectic(IntegerMatrix.from_rows([[0, 1], [-1, 0]])) == SymplecticMatrix.j(1)
    assert validate_symplectic(IntegerMatrix.identity(4)).genus == 2


def test_rejects_non_symplectic_naming_the_identity():
    # det 1 but R^T Q - S^T P != I
    M = IntegerMatrix.from_rows([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(NotSymplecticError) as excinfo:
        validate_symplectic(M)
    assert excinfo.value.identity in str(excinfo.value)


def test_rejects_odd_dimension():
    with pytest.raises(DimensionError):
        validate_symplectic(IntegerMatrix.identity(3))


def test_handlebody_factors():
    A = IntegerMatrix.from_rows([[2, 1], [1, 1]])
    Z = IntegerMatrix.from_rows([[1, 2], [2, -3]])
    assert in_handlebody_subgroup(sigma(A))
    assert in_handlebody_subgroup(omega(Z))
    assert not in_handlebody_subgroup(SymplecticMatrix.j(2))


def test_stabilize():
    H = lens_matrix(5, 2)
    assert stabilize(H, 0) == H
    assert stabilize(stabilize(H, 1), 1) == stabilize(H, 2)
    expected = SymplecticMatrix.from_blocks(
        IntegerMatrix.zeros(2), IntegerMatrix.identity(2), -IntegerMatrix.identity(2), IntegerMatrix.zeros(2)
    )
    assert stabilize(SymplecticMatrix.j(1), 1) == expected


def test_inverse_and_related_representatives():
    H = lens_sum_matrix([(3, 1), (6, 5)])
    assert H @ H.inverse() == SymplecticMatrix.identity(2)
    assert set(related_representatives(H)) == {"H", "H^T", "H^-1", "(H^T)^-1"}


def test_lens_matrix():
    H = lens_matrix(5, 2)
    assert H.matrix.tolist() == [[3, 5], [1, 2]]
    with pytest.raises(ValueError):
        lens_matrix(6, 4)


def test_identity_normal_form():
    nf = partial_normal_form(SymplecticMatrix.identity(3))
    assert (nf.t, nf.r, nf.stab_index) == (0, 3, 0)
    assert nf.is_certified()


def test_lens_normal_form():
    nf = partial_normal_form(lens_matrix(5, 2))
    assert (nf.t, nf.r, nf.stab_index) == (1, 0, 0)
    assert nf.tau == (5,)
    assert nf.q2[0, 0] == 2


def test_lens_sum_normal_form():
    nf = partial_normal_form(lens_sum_matrix([(2, 1), (4, 3), (8, 3)]))
    assert nf.tau == (2, 4, 8)
    assert nf.stab_index == 0
    assert nf.is_certified()


def test_stabilization_detection():
    assert is_stabilized(SymplecticMatrix.j(1))
    assert minimal_genus(SymplecticMatrix.j(1)) == 0
    assert not is_stabilized(lens_matrix(5, 2))
    assert not is_stabilized(SymplecticMatrix.identity(1))
    assert minimal_genus(SymplecticMatrix.identity(1)) == 1
    assert partial_normal_form(stabilize(lens_matrix(5, 2), 2)).stab_index == 2


@given(st.integers(1, 4), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_normal_form_is_certified(genus, seed):
    H = random_symplectic(genus, random.Random(seed), steps=4)
    nf = partial_normal_form(H)
    assert nf.is_certified()
    assert nf.stab_index + nf.t + nf.r == genus
    assert all(tau >= 2 for tau in nf.tau)
    assert all(b % a == 0 for a, b in zip(nf.tau, nf.tau[1:]))


@given(st.integers(1, 3), st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_normal_form_is_constant_on_double_cosets(genus, seed):
    rng = random.Random(seed)
    H = random_symplectic(genus, rng, steps=3)
    moved = random_handlebody_element(genus, rng) @ H @ random_handlebody_element(genus, rng)
    first, second = partial_normal_form(H), partial_normal_form(moved)
    assert (first.tau, first.r, first.stab_index) == (second.tau, second.r, second.stab_index)
