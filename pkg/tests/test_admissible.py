import pytest

from tldiag import CoxeterSpec, classify_diagram, factorize, is_admissible, length, make_diagram, simple_diagram, theta_diagram
from tldiag.admissible import (
    NotAdmissible,
    PZZType,
    admissibility_violation,
    edge_weight,
    inner_diagram,
    loop_weight,
    nu_counts,
    nu_total,
)
from tldiag.diagrams import CIRC, DOT, TRI, canonical_key, identity_diagram
from tldiag.enumerate import irreducible_diagrams
from tldiag.heaps import FamilyTag

from conftest import images


def pzz_word(n, i, j, k):
    period = (n + 1,) + tuple(range(n, 1, -1)) + (0, 1) + tuple(range(2, n + 1))
    return tuple(range(i, n + 1)) + period * k + (n + 1,) + tuple(range(n, j - 1, -1))


@pytest.mark.parametrize("spec", [CoxeterSpec.B(2), CoxeterSpec.B(4), CoxeterSpec.D(2), CoxeterSpec.D(3)])
def test_simple_diagrams_admissible(spec):
    for i in spec.generators:
        d = simple_diagram(spec, i)
        assert is_admissible(d) and length(d) == 1


def test_two_dot_loops_with_many_cups():
    d = make_diagram("B", 4, [(1, 2, ()), (3, 4, ()), (-1, -2, ()), (-3, -4, ())], loops=[(DOT,), (DOT,)])
    assert not is_admissible(d)
    assert admissibility_violation(d)


@pytest.mark.parametrize("family,n,max_len", [("B", 2, 12), ("D", 2, 11), ("B", 3, 9), ("D", 3, 8)])
def test_images_admissible(family, n, max_len):
    for w, d in images(family, n, max_len):
        assert is_admissible(d), w


@pytest.mark.parametrize("family,k,marks", [("B", 4, 4), ("D", 4, 4), ("B", 5, 3)])
def test_every_small_admissible_diagram_is_an_image(family, k, marks):
    for d in irreducible_diagrams(family, k, max_marks=marks):
        if is_admissible(d):
            spec = CoxeterSpec(family, k - 2)
            w = factorize(d)
            assert len(w) == length(d)
            assert canonical_key(theta_diagram(w, spec)) == canonical_key(d)


def test_identity_class_and_length():
    d = identity_diagram(5)
    assert classify_diagram(d).tag is FamilyTag.ALT
    assert length(d) == 0
    assert nu_counts(d) == [0] * 4


def test_pzz_dot_dot_example():
    d = theta_diagram((0, 1, 2, 3, 2, 0, 1), CoxeterSpec.B(2))
    c = classify_diagram(d)
    assert (c.tag, c.pzz_type, c.l, c.r) == (FamilyTag.PZZ, PZZType.LL, 2, 1)
    assert c.pzz_type.symbol(d.family) == "⟨••⟩"


def test_left_right_peak_example():
    spec = CoxeterSpec.B(12)
    d = theta_diagram((3, 2, 0, 1, 2, 3, 12, 13, 12), spec)
    c = classify_diagram(d)
    assert (c.tag, c.j_left, c.j_right) == (FamilyTag.LRP, 3, 13)
    inner = inner_diagram(d)
    assert inner.k == 13 - 3 + 1
    assert classify_diagram(inner).tag is FamilyTag.ALT


def test_weights():
    assert edge_weight((1, 2, ()), identity_diagram(4)) == 0
    assert loop_weight((DOT, TRI), CoxeterSpec.B(6).family, 6) == 7
    d = make_diagram(
        "B",
        8,
        [(1, 2, ()), (3, 4, (DOT, TRI)), (5, 8, (CIRC,)), (6, 7, ()), (-1, -6, (DOT,)), (-2, -5, ()), (-3, -4, ()), (-7, -8, (DOT, CIRC))],
        loops=[(DOT, TRI)] * 3,
    )
    assert edge_weight((3, 4, (DOT, TRI)), d) == 6


def test_nu_counts_of_generators():
    spec = CoxeterSpec.B(3)
    for i in range(2, spec.n + 1):
        nu = nu_counts(simple_diagram(spec, i))
        assert sorted(nu) == [0] * (len(nu) - 1) + [2]


@pytest.mark.parametrize("family,n,max_len", [("B", 2, 10), ("D", 2, 9), ("B", 3, 8)])
def test_nu_even_and_length_positive(family, n, max_len):
    for w, d in images(family, n, max_len):
        assert all(x % 2 == 0 for x in nu_counts(d))
        assert nu_total(d) == sum(nu_counts(d))
        assert (length(d) == 0) == (len(w) == 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pzz_closed_form_length(n):
    spec = CoxeterSpec.B(n)
    for k in range(4):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                w = pzz_word(n, i, j, k)
                d = theta_diagram(w, spec)
                assert length(d) == len(w) == 2 * n - i - j + 3 + (2 * n + 1) * k
                if k >= 1:
                    c = classify_diagram(d)
                    assert c.tag is FamilyTag.PZZ and c.pzz_type is PZZType.RR


def test_length_rejects_inadmissible():
    bad = make_diagram("B", 4, [(1, 2, ()), (3, 4, ()), (-1, -2, ()), (-3, -4, ())], loops=[(DOT,), (DOT,)])
    assert not is_admissible(bad)
    with pytest.raises(NotAdmissible):
        factorize(bad)
