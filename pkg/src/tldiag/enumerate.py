"""Direct enumeration of irreducible decorated diagrams of a small box.

This generator never multiplies generators.  It walks every planar matching,
puts exposure-respecting decoration words on the edges, adds loops and (for
a single cup) every height order, and keeps the candidates that the
reduction leaves untouched.  It is the independent side of the bijection
checks: its admissible output is compared with the images of FC words.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

from .coxeter import Family
from .diagrams import CIRC, DOT, TRI, Diagram, DiagramError, canonical_key, cyclic_form, make_diagram, reduce


@lru_cache(maxsize=None)
def planar_matchings(k: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """All non-crossing perfect matchings of the 2k boundary nodes of a k-box."""
    order = list(range(1, k + 1)) + [-i for i in range(k, 0, -1)]

    def rec(points):
        if not points:
            yield ()
            return
        first = points[0]
        for idx in range(1, len(points), 2):
            inside, outside = points[1:idx], points[idx + 1 :]
            for a in rec(inside):
                for b in rec(outside):
                    yield ((first, points[idx]),) + a + b

    return tuple(tuple(sorted(m)) for m in rec(order))


def _rmarks(family: Family) -> tuple[str, ...]:
    return (CIRC, TRI) if family is Family.AffineB else (CIRC,)


def _alternating_words(family: Family, max_len: int) -> list[tuple[str, ...]]:
    """Alternating dot/R words of length 1..max_len."""
    out = []
    for first in (True, False):
        for ln in range(1, max_len + 1):
            slots = []
            for i in range(ln):
                left = (i % 2 == 0) == first
                slots.append((DOT,) if left else _rmarks(family))
            out.extend(itertools.product(*slots))
    return out


def _loop_words(family: Family, max_len: int) -> list[tuple[str, ...]]:
    words = {(DOT,)} | {(r,) for r in _rmarks(family)}
    for w in _alternating_words(family, max_len):
        if len(w) % 2 == 0:
            words.add(cyclic_form(w))
    return sorted(words)


def _edge_options(d: Diagram, e, family: Family, max_word: int) -> list[tuple[str, ...]]:
    left, right = d.left_exposed(e), d.right_exposed(e)
    if left and right:
        return [()] + _alternating_words(family, max_word)
    if left:
        return [(), (DOT,)]
    if right:
        return [()] + [(r,) for r in _rmarks(family)]
    return [()]


def _is_irreducible(d: Diagram) -> bool:
    try:
        d.check()
        r = reduce(d)
    except DiagramError:
        return False
    return (r.scalar, r.delta) == (1, 0) and canonical_key(r.diagram) == canonical_key(d)


def _many_cups(family, k, edges, plain, max_marks, max_loops) -> Iterator[Diagram]:
    options = [_edge_options(plain, e, family, max_marks) for e in edges]
    loop_words = _loop_words(family, max_marks)
    singles = {(DOT,), (CIRC,)} if family is Family.AffineD else {(DOT,)}

    def assign(i, budget):
        if i == len(options):
            yield ()
            return
        for dd in options[i]:
            if len(dd) <= budget:
                for rest in assign(i + 1, budget - len(dd)):
                    yield (dd,) + rest

    for decors in assign(0, max_marks):
        used = sum(len(x) for x in decors)
        marks = {x for dd in decors for x in dd}
        es = [(u, v, dd) for (u, v, _), dd in zip(edges, decors)]
        yield make_diagram(family, k, es)
        for cnt in range(1, max_loops + 1):
            for loops in itertools.combinations_with_replacement(loop_words, cnt):
                if used + sum(len(w) for w in loops) > max_marks:
                    continue
                # a lone-mark loop absorbs every other copy of its mark
                solo = [w for w in loops if w in singles]
                if any(w[0] in marks or sum(w[0] in x for x in loops) > 1 for w in solo):
                    continue
                yield make_diagram(family, k, es, loops)


def _one_cup(family, k, edges, plain, max_heights) -> Iterator[Diagram]:
    cup = next(e for e in edges if e[0] > 0 and e[1] > 0)
    cap = next(e for e in edges if e[0] < 0 and e[1] < 0)
    props = plain.propagating()
    west, east = props[0][0], props[-1][0]
    rmarks = _rmarks(family)
    left_tokens = [(west, DOT), (0, DOT)]
    right_tokens = [(east, r) for r in rmarks]
    if family is Family.AffineD:
        right_tokens.append((0, CIRC))
    seqs = [()]
    for ln in range(1, max_heights + 1):
        for first_left in (True, False):
            slots = [left_tokens if (i % 2 == 0) == first_left else right_tokens for i in range(ln)]
            seqs.extend(itertools.product(*slots))
    middle = [(u, v, ()) for u, v, _ in props[1:-1]]
    for cd in _edge_options(plain, cup, family, 1):
        for pd in _edge_options(plain, cap, family, 1):
            for seq in seqs:
                es = [(cup[0], cup[1], cd), (cap[0], cap[1], pd)] + middle
                for u, v, _ in (props[0], props[-1]):
                    es.append((u, v, tuple(x for o, x in seq if o == u)))
                loops = [(x,) for o, x in seq if o == 0]
                yield make_diagram(family, k, es, loops, seq)


def irreducible_diagrams(family: Family, k: int, max_marks: int = 6, max_loops: int = 3) -> Iterator[Diagram]:
    """Every irreducible diagram of the box with at most ``max_marks`` decorations.

    Loops count towards the budget with all their marks; at most
    ``max_loops`` loops are tried when there are several cups.
    """
    family = Family(family)
    seen = set()
    for matching in planar_matchings(k):
        plain = make_diagram(family, k, [(u, v, ()) for u, v in matching])
        edges = plain.edges
        if plain.a == 0:
            gen = iter([plain])
        elif plain.a == 1:
            gen = _one_cup(family, k, edges, plain, max_marks)
        else:
            gen = _many_cups(family, k, edges, plain, max_marks, max_loops)
        for d in gen:
            key = canonical_key(d)
            if key in seen or not _is_irreducible(d):
                continue
            seen.add(key)
            yield d
