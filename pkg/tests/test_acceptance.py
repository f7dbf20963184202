"""Acceptance criteria 1-10.

Each criterion prints exactly one ``PASS``/``FAIL`` line.  Every check is
exact (tolerance 0: integer counts, equal canonical keys, equal heaps).
Wall-clock budgets are pinned below and are part of the pass condition
where the criterion states a hard limit.
"""

from __future__ import annotations

import random
import sys
import time
from collections import defaultdict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import brute_fc_counts
from tldiag import CoxeterSpec, classify_diagram, classify_family_B, classify_family_D, delta_D, enumerate_fc
from tldiag import factorize, factorize_trace, heap_from_word, is_admissible, length, make_diagram
from tldiag import check_presentation, multiply_diagrams, simple_diagram, theta_diagram
from tldiag.admissible import PZZType, edge_weight, loop_weight
from tldiag.diagrams import CIRC, DOT, TRI, canonical_key
from tldiag.enumerate import irreducible_diagrams
from tldiag.coxeter import NotFC, NotReduced
from tldiag.factor import _paste, _walk_words, generator_of, suitable_candidates
from tldiag.heaps import FamilyTag
from tldiag.verify import check_associativity, check_cut_and_paste

BUDGET_PRESENTATION = 5.0
BUDGET_ENUMERATION = 120.0
BUDGET_UNIQUENESS = 60.0
BUDGET_DELTA = 120.0
MAX_LEN = 12
UNIQUENESS_MARKS = 5
ASSOC_SEED = 2024
ASSOC_TRIPLES = 500

SPECS_2 = (CoxeterSpec.B(2), CoxeterSpec.D(2))
_cache: dict = {}


def enumeration(spec: CoxeterSpec, max_len: int = MAX_LEN):
    key = (spec, max_len)
    if key not in _cache:
        _cache[key] = [(w, theta_diagram(w, spec)) for level in enumerate_fc(spec, max_len) for w in level]
    return _cache[key]


def pzz_word(n, i, j, k):
    period = (n + 1,) + tuple(range(n, 1, -1)) + (0, 1) + tuple(range(2, n + 1))
    return tuple(range(i, n + 1)) + period * k + (n + 1,) + tuple(range(n, j - 1, -1))


# ---------------------------------------------------------------------------


def criterion_1():
    start = time.perf_counter()
    failed = []
    total = 0
    for spec in (CoxeterSpec.B(2), CoxeterSpec.B(3), CoxeterSpec.B(4), CoxeterSpec.D(2), CoxeterSpec.D(3)):
        for r in check_presentation(spec):
            total += 1
            if not r.passed:
                failed.append(f"{spec} {r.name}")
    elapsed = time.perf_counter() - start
    ok = not failed and elapsed < BUDGET_PRESENTATION
    return ok, f"{total} relations, {len(failed)} failed, {elapsed:.2f}s (budget {BUDGET_PRESENTATION}s)"


def criterion_2():
    start = time.perf_counter()
    parts = []
    ok = True
    for spec in SPECS_2:
        data = enumeration(spec)
        keys = {canonical_key(d) for _, d in data}
        oracle = sum(brute_fc_counts(spec, MAX_LEN))
        ok &= len(keys) == len(data) == oracle
        parts.append(f"{spec.family.value}: {len(data)} words, {len(keys)} diagrams, oracle {oracle}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < BUDGET_ENUMERATION
    return ok, "; ".join(parts) + f", {elapsed:.1f}s"


def criterion_3():
    bad = [w for spec in SPECS_2 for w, d in enumeration(spec) if length(d) != len(w)]
    formula_bad = 0
    cases = 0
    for n in (2, 3, 4):
        spec = CoxeterSpec.B(n)
        for k in range(4):
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    cases += 1
                    w = pzz_word(n, i, j, k)
                    if length(theta_diagram(w, spec)) != 2 * n - i - j + 3 + (2 * n + 1) * k:
                        formula_bad += 1
    ok = not bad and formula_bad == 0
    return ok, f"{len(bad)} length mismatches; closed form {cases - formula_bad}/{cases}"


def criterion_4():
    bad = 0
    tags = defaultdict(int)
    for spec in SPECS_2:
        classify = classify_family_B if spec.family.value == "B" else classify_family_D
        for w, d in enumeration(spec):
            t = classify(heap_from_word(w, spec)).tag
            tags[t.value] += 1
            bad += t is not classify_diagram(d).tag
    return bad == 0, f"{bad} mismatches, tags {dict(sorted(tags.items()))}"


def criterion_5():
    results = [check_cut_and_paste(spec, MAX_LEN) for spec in SPECS_2]
    ok = all(r.passed for r in results)
    return ok, "; ".join(f"{r.family}: {r.counts['edges']} edges, {r.counts['failed']} failed" for r in results)


def _covered_length(spec: CoxeterSpec, marks: int, probe: int) -> int:
    """Largest L such that every admissible diagram of length <= L has at most ``marks`` decorations."""
    worst = defaultdict(int)
    for w, d in enumeration(spec, probe):
        worst[len(w)] = max(worst[len(w)], len(d.decorations()))
    covered = 0
    while covered + 1 <= probe and worst[covered + 1] <= marks:
        covered += 1
    return covered


def _south_caps(d):
    return frozenset((u, v) for u, v, _ in d.south_edges())


def criterion_6():
    start = time.perf_counter()
    pairs = 0
    bad = []
    parts = []
    for spec in (CoxeterSpec.B(2), CoxeterSpec.D(2), CoxeterSpec.B(3), CoxeterSpec.D(3)):
        covered = _covered_length(spec, UNIQUENESS_MARKS, 8)
        pool = defaultdict(list)
        for d in irreducible_diagrams(spec.family, spec.k, max_marks=UNIQUENESS_MARKS):
            ln = length(d) if is_admissible(d) else None
            if ln is not None and ln <= covered:
                pool[ln].append(d)
        tested = 0
        for w, d in enumeration(spec, covered + 1):
            if not w or classify_diagram(d).tag is not FamilyTag.ALT:
                continue
            caps = _south_caps(d)
            for se in suitable_candidates(d):
                g = generator_of(d, se.edge)
                dg = simple_diagram(spec, g)
                hits = []
                for dp in pool[len(w) - 1]:
                    if not _south_caps(dp) <= caps:
                        continue
                    r = multiply_diagrams(dg, dp)
                    if (r.scalar, r.delta) == (1, 0) and r.diagram == d:
                        hits.append(dp)
                tested += 1
                if len(hits) != 1 or hits[0] != _paste(d, se):
                    bad.append((spec.family.value, spec.n, w, se.describe(), len(hits)))
        pairs += tested
        parts.append(f"{spec.family.value} k={spec.k}: len<={covered + 1}, {tested} pairs")
    elapsed = time.perf_counter() - start
    ok = not bad and pairs > 0 and elapsed < BUDGET_UNIQUENESS
    return ok, "; ".join(parts) + f"; {len(bad)} not unique, {elapsed:.1f}s (budget {BUDGET_UNIQUENESS}s)"


def criterion_7():
    bad = 0
    total = 0
    for spec in SPECS_2:
        for w, d in enumeration(spec):
            total += 1
            v = factorize(d)
            bad += heap_from_word(v, spec) != heap_from_word(w, spec) or theta_diagram(v, spec) != d
    return bad == 0, f"{total} round trips, {bad} failed"


# criterion 8 reconstructions ------------------------------------------------


def alt41_diagrams():
    """The two diagrams matching the caption data of the length-41 ALT figure."""
    south = [(-2, -5, ()), (-3, -4, ()), (-7, -8, (DOT, CIRC))]
    common = [(3, 4, (DOT, TRI)), (5, 8, (CIRC,)), (6, 7, ())]
    a = make_diagram("B", 8, [(1, 2, ())] + common + [(-1, -6, (DOT,))] + south, loops=[(DOT, TRI)] * 3)
    b = make_diagram("B", 8, [(1, 2, (DOT,))] + common + [(-1, -6, ())] + south, loops=[(DOT, TRI)] * 3)
    return a, b


LP24_WORD = (8, 7, 6, 5, 8, 4, 7, 6, 3, 2, 0, 1, 2, 3, 8, 5, 7, 4, 8, 6, 5, 7, 8, 6)


def pzz25_diagrams():
    """Every diagram with type ⟨••⟩, l=3, r=2 and length 25 in boxes n=2..7.

    Pseudo zigzag diagrams are images of zigzag walk words, so searching
    the walk words of length 25 finds all of them.
    """
    out = {}
    for n in range(2, 8):
        spec = CoxeterSpec.B(n)
        for w in _walk_words(spec, 25):
            try:
                d = theta_diagram(w, spec)
            except (NotFC, NotReduced):
                continue
            cls = classify_diagram(d)
            if (cls.tag, cls.pzz_type, cls.l, cls.r) == (FamilyTag.PZZ, PZZType.LL, 3, 2):
                out[canonical_key(d)] = (n, w, d)
    return sorted(out.values(), key=lambda x: (x[0], x[1]))


def criterion_8():
    parts = []
    ok = True
    # length-41 ALT-diagram
    for d in alt41_diagrams():
        cls = classify_diagram(d)
        w = factorize_trace(d, verify=True).word
        good = (
            is_admissible(d)
            and cls.tag is FamilyTag.ALT
            and loop_weight((DOT, TRI), d.family, 6) == 7
            and edge_weight((3, 4, (DOT, TRI)), d) == 6
            and length(d) == 41
            and len(w) == 41
        )
        ok &= good
    parts.append(f"ALT 41: 2 reconstructions {'ok' if ok else 'wrong'}")
    # PZZ of type ⟨••⟩ with l=3, r=2, length 25
    zz = 0
    found = pzz25_diagrams()
    for n, word, d in found:
        good = length(d) == 25 and len(factorize_trace(d, verify=True).word) == 25
        zz += good
    ok &= zz == len(found) > 0
    boxes = sorted({(n, classify_diagram(d).i, classify_diagram(d).j) for n, _, d in found})
    parts.append(f"PZZ 25: {zz}/{len(found)} with (n,i,j) in {boxes}")
    # LP-diagram with j_l=3, length 24
    spec = CoxeterSpec.B(7)
    d = theta_diagram(LP24_WORD, spec)
    cls = classify_diagram(d)
    good = cls.tag is FamilyTag.LP and cls.j_left == 3 and length(d) == 24
    good &= len(factorize_trace(d, verify=True).word) == 24
    ok &= good
    parts.append(f"LP 24: {'ok' if good else 'wrong'}")
    # worked factorization traces: only an image in the source, no data to compare against
    parts.append("worked traces: not reproducible (figure only)")
    ok = False
    return ok, "; ".join(parts)


def criterion_9():
    start = time.perf_counter()
    bspec, dspec = CoxeterSpec.B(2), CoxeterSpec.D(2)
    union = set()
    bad = 0
    for w in (w for level in enumerate_fc(bspec, 10) for w in level):
        h = heap_from_word(w, bspec)
        tag = classify_family_B(h).tag
        for dh in delta_D(h):
            if dh.fc_defect() is not None or classify_family_D(dh).tag is not tag:
                bad += 1
            union.add(dh)
    target = {heap_from_word(w, dspec) for level in enumerate_fc(dspec, 10) for w in level}
    missing = len(target - {h for h in union if len(h) <= 10})
    elapsed = time.perf_counter() - start
    ok = bad == 0 and missing == 0 and elapsed < BUDGET_DELTA
    return ok, f"{len(union)} images, {bad} bad, {missing}/{len(target)} D-elements missing, {elapsed:.1f}s"


def criterion_10():
    results = [check_associativity(spec, 8, seed=ASSOC_SEED, triples=ASSOC_TRIPLES) for spec in (CoxeterSpec.B(3), CoxeterSpec.D(3))]
    ok = all(r.passed for r in results)
    return ok, "; ".join(f"{r.family} k=5: {r.counts['triples']} triples, {r.counts['failed']} failed" for r in results)


CRITERIA = {
    1: ("presentation", criterion_1),
    2: ("injectivity", criterion_2),
    3: ("length", criterion_3),
    4: ("families", criterion_4),
    5: ("cut and paste", criterion_5),
    6: ("uniqueness", criterion_6),
    7: ("round trips", criterion_7),
    8: ("figure values", criterion_8),
    9: ("type D substitution", criterion_9),
    10: ("associativity", criterion_10),
}


def run_criterion(number: int) -> tuple[bool, str]:
    name, fn = CRITERIA[number]
    ok, detail = fn()
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({name}): {detail}"
    return ok, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line = run_criterion(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(q) for q in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
