"""Independent reference implementations used to freeze derived values.

Nothing here imports the diagram code.  The FC enumerator works on plain
words; the monomial oracle multiplies basis elements of the generalized
Temperley-Lieb algebra by rewriting words with the defining relations.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache

from tldiag.coxeter import CoxeterSpec, coxeter_matrix


def _bad(word, m) -> bool:
    for a, b in zip(word, word[1:]):
        if a == b:
            return True
    for i in range(len(word) - 1):
        s, t = word[i], word[i + 1]
        mst = m[s][t]
        if mst >= 3 and i + mst <= len(word):
            if all(word[i + q] == (s, t)[q % 2] for q in range(mst)):
                return True
    return False


def _class(word, m):
    seen = {word}
    stack = [word]
    while stack:
        w = stack.pop()
        for i in range(len(w) - 1):
            s, t = w[i], w[i + 1]
            if s != t and m[s][t] == 2:
                v = w[:i] + (t, s) + w[i + 2:]
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return seen


def brute_fc_counts(spec: CoxeterSpec, max_len: int) -> list[int]:
    """Count FC elements by length: BFS over words, rejecting any class with a square or braid factor."""
    m = coxeter_matrix(spec)
    counts = [1]
    level = {()}
    for _ in range(max_len):
        nxt = set()
        for rep in level:
            for s in range(spec.rank):
                w = rep + (s,)
                cls = _class(w, m)
                if any(_bad(v, m) for v in cls):
                    continue
                nxt.add(min(cls))
        counts.append(len(nxt))
        level = nxt
    return counts


def _heap_below(word, m):
    below = []
    for j, t in enumerate(word):
        b = 0
        for i in range(j):
            if m[word[i]][t] != 2:
                b |= (1 << i) | below[i]
        below.append(b)
    return below


def _find_reduction(word, m):
    """Locate a square or a convex braid chain; return (kind, chain indices)."""
    below = _heap_below(word, m)
    n = len(word)
    above = [0] * n
    for j in range(n):
        for i in range(n):
            if (below[j] >> i) & 1:
                above[i] |= 1 << j
    for j in range(n):
        for i in range(j):
            if not (below[j] >> i) & 1:
                continue
            inner = above[i] & below[j]
            members = [q for q in range(n) if (inner >> q) & 1]
            if not members:
                if word[i] == word[j]:
                    return "square", [i, j], below, above
                continue
            chain = [i] + members + [j]
            s, t = word[i], word[members[0]]
            mst = m[s][t]
            if mst >= 3 and len(chain) == mst and all(word[c] == (s, t)[q % 2] for q, c in enumerate(chain)):
                return "braid", chain, below, above
    return None


def _extension_with_chain(word, chain, below, above):
    n = len(word)
    cset = set(chain)
    first = set()
    for c in chain:
        for q in range(n):
            if (below[c] >> q) & 1 and q not in cset:
                first.add(q)
                first |= {r for r in range(n) if (below[q] >> r) & 1}
    head = sorted(first)
    rest = [q for q in range(n) if q not in first and q not in cset]
    return head, rest


@lru_cache(maxsize=None)
def monomial_product(word: tuple, spec: CoxeterSpec) -> tuple[tuple[int, int], tuple]:
    """Rewrite b_{word} as 2^a * delta^d * b_w with w an FC reduced word.

    Returns ((a, d), w).  Uses only the defining relations of the algebra.
    """
    m = coxeter_matrix(spec)
    two = delta = 0
    w = tuple(word)
    while True:
        found = _find_reduction(w, m)
        if found is None:
            return (two, delta), w
        kind, chain, below, above = found
        head, rest = _extension_with_chain(w, chain, below, above)
        if kind == "square":
            delta += 1
            keep = [chain[0]]
        else:
            mst = len(chain)
            if mst == 3:
                keep = [chain[0]]
            else:
                two += 1
                keep = chain[:2]
        w = tuple(w[q] for q in head) + tuple(w[q] for q in keep) + tuple(w[q] for q in rest)
