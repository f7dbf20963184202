import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import monomial_product
from tldiag import AlgebraElement, CoxeterSpec, DeltaPoly, check_presentation, simple_diagram, theta, theta_diagram
from tldiag.algebra import structure_constants, word_product
from tldiag.diagrams import DOT, make_diagram

from conftest import fc_words

B2, D2 = CoxeterSpec.B(2), CoxeterSpec.D(2)


@pytest.mark.parametrize("spec", [CoxeterSpec.B(2), CoxeterSpec.B(3), CoxeterSpec.B(4), CoxeterSpec.D(2), CoxeterSpec.D(3)])
def test_presentation(spec):
    report = check_presentation(spec)
    assert report and all(r.passed for r in report), [r.name for r in report if not r.passed]


def test_corrupted_generator_breaks_presentation():
    bad = make_diagram("B", 4, [(1, 2, (DOT,)), (-1, -2, ()), (3, -3, ()), (4, -4, ())])
    report = check_presentation(B2, {0: bad})
    assert any(not r.passed and r.name.startswith("(b3)") for r in report)


def test_delta_poly_arithmetic():
    d = DeltaPoly.monomial(1, 1)
    assert (d + d) * d == DeltaPoly((0, 0, 2))
    assert (d - d).is_zero()
    assert str(DeltaPoly((1, 0, 3))) == "1 + 3δ^2"


def test_element_identities():
    one = theta((), B2)
    x = theta((0, 2, 1), B2)
    assert one * x == x
    assert (one.scale(DeltaPoly.monomial(1, 1))) * x == x.scale(DeltaPoly.monomial(1, 1))
    assert theta((0,), B2) * theta((1,), B2) == theta((1,), B2) * theta((0,), B2)


def test_element_json_round_trip():
    x = theta((2, 3), B2) * theta((2, 3), B2)
    assert AlgebraElement.from_json(x.to_json()) == x


def test_empty_word_gives_identity():
    assert theta_diagram((), B2).is_identity()


def test_worked_word_length():
    from tldiag import length

    spec = CoxeterSpec.B(4)
    assert length(theta_diagram((3, 5, 2, 4, 0, 1, 3, 5, 2, 4, 5), spec)) == 11


@pytest.mark.parametrize("spec", [B2, D2, CoxeterSpec.B(3)])
def test_structure_constants_examples(spec):
    for i in spec.generators:
        assert structure_constants((i,), (i,), spec) == {(i,): DeltaPoly.monomial(1, 1)}
    assert structure_constants((0,), (1,), spec) == {(0, 1): DeltaPoly.const(1)}


def test_structure_constants_double_bond():
    n = B2.n
    assert structure_constants((n, n + 1), (n, n + 1), B2) == {(n, n + 1): DeltaPoly.const(2)}


@pytest.mark.parametrize("spec", [B2, D2])
def test_words_against_relation_oracle(spec):
    rng = random.Random(11)
    for _ in range(300):
        word = tuple(rng.randrange(spec.rank) for _ in range(rng.randrange(1, 8)))
        (a, d), w = monomial_product(word, spec)
        diag, scalar, delta = word_product(word, spec)
        assert (scalar, delta) == (2**a, d)
        assert diag == theta_diagram(w, spec)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_product_of_basis_elements_is_monomial(data):
    spec = B2
    pool = fc_words("B", 2, 7)
    u = data.draw(st.sampled_from(pool))
    v = data.draw(st.sampled_from(pool))
    (a, d), w = monomial_product(u + v, spec)
    expected = theta(w, spec).scale(DeltaPoly.monomial(2**a, d))
    assert theta(u, spec) * theta(v, spec) == expected


def test_simple_diagrams_are_distinct_per_family():
    for spec in (B2, D2):
        assert len({simple_diagram(spec, i) for i in spec.generators}) == spec.rank
