import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_fc_counts
from tldiag import CoxeterSpec, NotReduced, enumerate_fc, is_fully_commutative
from tldiag.coxeter import (
    canonical_word,
    commutation_class,
    coxeter_matrix,
    is_fully_commutative_by_class,
    is_reduced,
)

B2, B4, D2 = CoxeterSpec.B(2), CoxeterSpec.B(4), CoxeterSpec.D(2)


def test_matrix_type_b():
    m = coxeter_matrix(B2)
    assert m[2][3] == 4 and m[0][2] == 3 and m[0][1] == 2


def test_matrix_type_d():
    m = coxeter_matrix(D2)
    assert m[2][3] == m[2][4] == 3 and m[3][4] == 2


@pytest.mark.parametrize("spec", [B2, D2, CoxeterSpec.B(5), CoxeterSpec.D(4)])
def test_matrix_diagonal_and_symmetry(spec):
    m = coxeter_matrix(spec)
    for s in spec.generators:
        assert m[s][s] == 1
        for t in spec.generators:
            assert m[s][t] == m[t][s]


def test_rank():
    assert B2.rank == 4 and D2.rank == 5 and B2.k == D2.k == 4


def test_n_below_two_rejected():
    with pytest.raises(ValueError):
        CoxeterSpec.B(1)


def test_worked_word_is_fc():
    assert is_fully_commutative((3, 5, 2, 4, 0, 1, 3, 5, 2, 4, 5), B4)


def test_braid_factor_is_not_fc():
    assert not is_fully_commutative((2, 3, 2, 3), B2)


def test_empty_word_is_fc():
    assert is_fully_commutative((), B2)


def test_non_reduced_word_raises():
    with pytest.raises(NotReduced):
        is_fully_commutative((1, 1), B2)


def test_out_of_range_generator():
    with pytest.raises(ValueError):
        is_fully_commutative((7,), B2)


def test_enumerate_small():
    assert enumerate_fc(B2, 0) == [[()]]
    assert sorted(enumerate_fc(B2, 1)[1]) == [(0,), (1,), (2,), (3,)]


@pytest.mark.parametrize("spec,max_len", [(B2, 12), (D2, 12), (CoxeterSpec.B(3), 9), (CoxeterSpec.D(3), 9)])
def test_enumerate_matches_oracle(spec, max_len):
    assert [len(x) for x in enumerate_fc(spec, max_len)] == brute_fc_counts(spec, max_len)


def test_enumerated_words_are_canonical_and_fc():
    for level in enumerate_fc(D2, 8):
        for w in level:
            assert canonical_word(w, D2) == w
            assert is_fully_commutative(w, D2)


def test_commutation_class_of_commuting_pair():
    assert commutation_class((0, 1), B2) == {(0, 1), (1, 0)}


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=8), st.sampled_from(["B", "D"]))
def test_heap_criterion_agrees_with_class_exploration(word, family):
    spec = CoxeterSpec(family, 2)
    word = [x for x in word if x < spec.rank]
    if not is_reduced(word, spec):
        with pytest.raises(NotReduced):
            is_fully_commutative(word, spec)
        return
    assert is_fully_commutative(word, spec) == is_fully_commutative_by_class(word, spec)


def test_random_long_words_agree():
    rng = random.Random(7)
    spec = CoxeterSpec.B(3)
    checked = 0
    while checked < 150:
        w = [rng.randrange(spec.rank) for _ in range(rng.randrange(4, 11))]
        if is_reduced(w, spec):
            assert is_fully_commutative(w, spec) == is_fully_commutative_by_class(w, spec)
            checked += 1
