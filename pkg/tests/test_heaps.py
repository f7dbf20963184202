from tldiag import CoxeterSpec, classify_family_B, classify_family_D, delta_D, heap_from_word
from tldiag.heaps import FamilyTag, contract_D, is_alternating

from conftest import fc_words

B3, B4 = CoxeterSpec.B(3), CoxeterSpec.B(4)
W = (3, 5, 2, 4, 0, 1, 3, 5, 2, 4, 5)


def test_small_heap_order():
    h = heap_from_word((0, 2, 1, 3, 2), B3)
    assert len(h) == 5
    # the top s2 lies below both s0 and s1 in the poset read bottom up
    i2 = h.labels.index(2)
    for s in (0, 1):
        assert h.less(h.labels.index(s), i2) or h.less(i2, h.labels.index(s))


def test_single_letter_heap():
    h = heap_from_word((3,), B3)
    assert len(h) == 1 and h.covers == ()


def test_commuting_pair_same_heap():
    assert heap_from_word((0, 1), B3) == heap_from_word((1, 0), B3)


def test_subheap_on_two_generators():
    h = heap_from_word(W, B4)
    sub = h.subheap({4, 5})
    assert len(sub) == 5
    assert sub.chain(4, 5) == [5, 4, 5, 4, 5]


def test_subheap_extremes():
    h = heap_from_word(W, B4)
    assert len(h.subheap(set())) == 0
    assert h.subheap(set(range(6))) == h


def test_alternating_examples():
    assert is_alternating(heap_from_word(W, B4))
    assert is_alternating(heap_from_word((0, 2, 1, 3, 2), B3))
    assert not is_alternating(heap_from_word((3, 4, 3), B3))
    assert is_alternating(heap_from_word((), B3))


def test_layers_cover_all_elements():
    h = heap_from_word(W, B4)
    assert sum(len(x) for x in h.layers) == len(W)


def test_classify_pzz_word():
    n = 3
    period = (n + 1,) + tuple(range(n, 1, -1)) + (0, 1) + tuple(range(2, n + 1))
    w = tuple(range(2, n + 1)) + period + (n + 1, n)
    assert classify_family_B(heap_from_word(w, B3)).tag is FamilyTag.PZZ


def test_classify_left_peak():
    w = (3, 2, 0, 1, 2, 3)
    fam = classify_family_B(heap_from_word(w, B4))
    assert fam.tag is FamilyTag.LP and fam.j_left == 3


def test_classify_single_letter():
    assert classify_family_B(heap_from_word((2,), B3)).tag is FamilyTag.ALT


def test_delta_without_right_letter():
    h = heap_from_word((0, 2, 1), CoxeterSpec.B(2))
    assert len(delta_D(h)) == 1


def test_delta_single_right_letter():
    spec = CoxeterSpec.B(2)
    out = delta_D(heap_from_word((3,), spec))
    assert sorted(x.labels for x in out) == [(3,), (3, 4), (4,)]


def test_delta_right_peak():
    spec = CoxeterSpec.B(2)
    for w in fc_words("B", 2, 8):
        h = heap_from_word(w, spec)
        if classify_family_B(h).tag is FamilyTag.RP:
            out = delta_D(h)
            assert len(out) == 1
            (d,) = out
            assert d.count(3) == d.count(4) == h.count(3)


def test_delta_images_preserve_family_and_contract_back():
    spec = CoxeterSpec.B(2)
    for w in fc_words("B", 2, 8):
        h = heap_from_word(w, spec)
        tag = classify_family_B(h).tag
        for d in delta_D(h):
            assert d.fc_defect() is None
            assert classify_family_D(d).tag is tag
            assert contract_D(d) == h
