"""Heaps of fully commutative words and the five-family classification.

A heap is stored in canonical form: its elements are listed in the order of
the lexicographically least linear extension, so two words of the same
commutation class produce equal :class:`Heap` objects.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .coxeter import CoxeterSpec, Family, NotFC, NotReduced, Word, check_word, coxeter_matrix


def _bits(x: int) -> Iterable[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _order_from_labels(labels: Sequence[int], m) -> list[int]:
    """``below[j]`` is the bitset of indices strictly below ``j`` in the heap order."""
    below: list[int] = []
    for j, t in enumerate(labels):
        b = 0
        for i in range(j - 1, -1, -1):
            if (b >> i) & 1:
                continue
            if m[labels[i]][t] != 2:
                b |= (1 << i) | below[i]
        below.append(b)
    return below


def _lex_least_extension(labels: Sequence[int], below: Sequence[int]) -> list[int]:
    remaining = (1 << len(labels)) - 1
    placed = 0
    order: list[int] = []
    while remaining:
        best = None
        for i in _bits(remaining):
            if below[i] & ~placed == 0 and (best is None or labels[i] < labels[best]):
                best = i
        order.append(best)
        placed |= 1 << best
        remaining &= ~(1 << best)
    return order


@dataclass(frozen=True)
class Heap:
    """Labeled poset of a word, kept in canonical (lexicographically least) order.

    ``labels[i]`` is the generator of element ``i``; ``below[j]`` is a bitset of
    the elements strictly below ``j`` (i.e. occurring to the left in every
    linear extension).
    """

    spec: CoxeterSpec
    labels: Word
    below: tuple[int, ...] = field(compare=False, repr=False)

    @classmethod
    def from_labels(cls, labels: Sequence[int], spec: CoxeterSpec) -> "Heap":
        m = coxeter_matrix(spec)
        labels = tuple(labels)
        below = _order_from_labels(labels, m)
        order = _lex_least_extension(labels, below)
        canon = tuple(labels[i] for i in order)
        return cls(spec, canon, tuple(_order_from_labels(canon, m)))

    def __len__(self) -> int:
        return len(self.labels)

    def canonical_word(self) -> Word:
        return self.labels

    @cached_property
    def above(self) -> tuple[int, ...]:
        up = [0] * len(self.labels)
        for j, b in enumerate(self.below):
            for i in _bits(b):
                up[i] |= 1 << j
        return tuple(up)

    def less(self, i: int, j: int) -> bool:
        return bool((self.below[j] >> i) & 1)

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        out = []
        for j, b in enumerate(self.below):
            for i in _bits(b):
                if b & self.above[i] == 0:
                    out.append((i, j))
        return tuple(sorted(out))

    @cached_property
    def layers(self) -> tuple[tuple[int, ...], ...]:
        """Cartier-Foata layers as sorted label tuples (top layer first)."""
        depth = []
        for j, b in enumerate(self.below):
            depth.append(1 + max((depth[i] for i in _bits(b)), default=-1))
        out: dict[int, list[int]] = {}
        for i, d in enumerate(depth):
            out.setdefault(d, []).append(self.labels[i])
        return tuple(tuple(sorted(out[d])) for d in sorted(out))

    def interval(self, i: int, j: int) -> int:
        return self.above[i] & self.below[j]

    def fc_defect(self) -> str | None:
        """``None`` if the heap is reduced and FC, else ``"square"`` or ``"braid"``.

        A square is a pair of equal labels with nothing between them; a braid
        is a convex alternating chain of length ``m_st >= 3``.
        """
        found = self.find_defect()
        return None if found is None else found[0]

    def find_defect(self) -> tuple[str, tuple[int, ...]] | None:
        m = coxeter_matrix(self.spec)
        labels = self.labels
        for j in range(len(labels)):
            for i in _bits(self.below[j]):
                inner = self.interval(i, j)
                if inner == 0:
                    if labels[i] == labels[j]:
                        return "square", (i, j)
                    continue
                chain = [i, *sorted(_bits(inner)), j]
                s, t = labels[i], labels[chain[1]]
                mst = m[s][t]
                if mst < 3 or len(chain) != mst:
                    continue
                if all(labels[c] == (s if q % 2 == 0 else t) for q, c in enumerate(chain)):
                    return "braid", tuple(chain)
        return None

    def subheap(self, labels: Iterable[int]) -> "Heap":
        keep = set(labels)
        return Heap.from_labels([x for x in self.labels if x in keep], self.spec)

    def chain(self, s: int, t: int) -> list[int]:
        """Labels of the chain H_{s,t} from top to bottom."""
        return [x for x in self.labels if x in (s, t)]

    def count(self, s: int) -> int:
        return self.labels.count(s)

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "covers": [list(c) for c in self.covers]}

    def ascii(self) -> str:
        """Hasse rendering with one column per generator, top layer first."""
        r = self.spec.rank
        depth = []
        for j, b in enumerate(self.below):
            depth.append(1 + max((depth[i] for i in _bits(b)), default=-1))
        rows = max(depth, default=-1) + 1
        grid = [["." for _ in range(r)] for _ in range(rows)]
        for i, d in enumerate(depth):
            grid[d][self.labels[i]] = str(self.labels[i])
        head = " ".join(f"{g}" for g in range(r))
        return "\n".join([head] + [" ".join(row) for row in grid])


def heap_from_word(w: Sequence[int], spec: CoxeterSpec, check: bool = True) -> Heap:
    """Heap of a word.  With ``check`` the word must be reduced (else NotReduced)."""
    word = check_word(w, spec)
    heap = Heap.from_labels(word, spec)
    if check:
        defect = heap.fc_defect()
        if defect == "square":
            raise NotReduced(f"{list(word)} is not reduced")
        if defect == "braid":
            from .coxeter import is_reduced

            if not is_reduced(word, spec):
                raise NotReduced(f"{list(word)} is not reduced")
    return heap


def _column_chain(h: Heap, s: int, t: int) -> list[int]:
    """Chain H_{s,t}; in type B the labels 0 and 1 form one column of 1-elements.

    A run of 1-elements with no s_2 between them (a fused s0s1) counts once.
    """
    if h.spec.family is Family.AffineB and 1 in (s, t) and 2 in (s, t):
        out: list[int] = []
        for x in h.labels:
            if x in (0, 1):
                if not out or out[-1] != 1:
                    out.append(1)
            elif x == 2:
                out.append(2)
        return out
    return h.chain(s, t)


def _bond_pairs(h: Heap, labels) -> list[tuple[int, int]]:
    m = coxeter_matrix(h.spec)
    labels = sorted(set(labels))
    pairs = []
    for a in labels:
        for b in labels:
            if a < b and m[a][b] != 2:
                if h.spec.family is Family.AffineB and a == 0:
                    continue  # the 0-2 bond is folded into the 1-element column
                pairs.append((a, b))
    return pairs


def is_alternating(h: Heap) -> bool:
    """Every chain H_{s,t} on a bond alternates from top to bottom.

    For type B the heap is read in the n+1 column form, with s0, s1 and a
    fused s0s1 all sitting in the first column.
    """
    for s, t in _bond_pairs(h, range(h.spec.rank)):
        seq = _column_chain(h, s, t)
        if any(a == b for a, b in zip(seq, seq[1:])):
            return False
    return True


class FamilyTag(str, enum.Enum):
    ALT = "ALT"
    PZZ = "PZZ"
    LP = "LP"
    RP = "RP"
    LRP = "LRP"


@dataclass(frozen=True)
class HeapFamily:
    tag: FamilyTag
    j_left: int | None = None
    j_right: int | None = None


def one_elements(h: Heap) -> list[str]:
    """The column of 1-elements, top to bottom, with fused ``s0s1`` pairs as ``"01"``."""
    out: list[str] = []
    pending: list[int] = []
    for x in h.labels:
        if x in (0, 1):
            pending.append(x)
        elif x == 2 and pending:
            out.append("01" if len(set(pending)) == 2 else str(pending[0]))
            pending = []
    if pending:
        out.append("01" if len(set(pending)) == 2 else str(pending[0]))
    return out


def _alternating_pairs(h: Heap, labels: set[int], merged: set[int]) -> bool:
    """Chains inside ``labels`` alternate, after fusing the two copies of each label in ``merged``."""
    for s, t in _bond_pairs(h, labels):
        seq = _column_chain(h, s, t)
        collapsed: list[int] = []
        for x in seq:
            if collapsed and collapsed[-1] == x and x in merged:
                continue
            collapsed.append(x)
        if any(a == b for a, b in zip(collapsed, collapsed[1:])):
            return False
    return True


def _peak_left(j: int, spec: CoxeterSpec) -> Heap:
    word = list(range(j, 1, -1)) + [0, 1] + list(range(2, j + 1))
    return Heap.from_labels(word, spec)


def _peak_right(j: int, spec: CoxeterSpec) -> Heap:
    n = spec.n
    word = list(range(j, n + 2)) + list(range(n, j - 1, -1))
    return Heap.from_labels(word, spec)


def _between(h: Heap, s: int, t: int) -> bool:
    """True if a ``t``-element lies strictly between the two ``s``-elements.

    In type B the label 1 stands for the whole column of 1-elements.
    """
    idx = [i for i, x in enumerate(h.labels) if x == s]
    if len(idx) != 2:
        return False
    targets = {0, 1} if (h.spec.family is Family.AffineB and t == 1) else {t}
    inner = h.interval(idx[0], idx[1])
    return any(h.labels[q] in targets for q in _bits(inner))


def _left_peak_ok(h: Heap, j: int) -> bool:
    n = h.spec.n
    if h.subheap(range(0, j + 1)) != _peak_left(j, h.spec):
        return False
    if _between(h, j, j + 1):
        return False
    return True


def _right_peak_ok(h: Heap, j: int) -> bool:
    n = h.spec.n
    if h.subheap(range(j, n + 2)) != _peak_right(j, h.spec):
        return False
    if _between(h, j, j - 1):
        return False
    return True


def _one_elements_ok(h: Heap) -> bool:
    ones = one_elements(h)
    if len(ones) < 2:
        return True
    if "01" in ones:
        return False
    return all(a != b for a, b in zip(ones, ones[1:]))


def pzz_period(n: int) -> Word:
    return (0, 1) + tuple(range(2, n + 1)) + (n + 1,) + tuple(range(n, 1, -1))


def _contains(word: Sequence[int], factor: Sequence[int]) -> bool:
    k = len(factor)
    return any(tuple(word[i:i + k]) == tuple(factor) for i in range(len(word) - k + 1))


def is_pzz(h: Heap) -> bool:
    """Some word of the class is a factor of (s0 s1 s2 ... s_n s_{n+1} s_n ... s2)^infinity.

    The commuting pair s0 s1 may be read in either order in every period, so
    a factor may begin or end with either of the two letters.
    """
    n = h.spec.n
    period = pzz_period(n)
    p = len(period)
    length = len(h)
    if length < 5:
        return False
    flipped = (1, 0) + period[2:]
    for start in range(p):
        for head in (period, flipped):
            for tail in (period, flipped):
                word = []
                for q in range(length):
                    pos = start + q
                    src = head if pos < p else (tail if (pos // p) == (start + length - 1) // p else period)
                    word.append(src[pos % p])
                if not (_contains(word, (n, n + 1, n)) and (_contains(word, (0, 1)) or _contains(word, (1, 0)))):
                    continue
                if Heap.from_labels(word, h.spec) == h:
                    return True
    return False


def classify_family_B(h: Heap) -> HeapFamily:
    """Family of an FC heap of type B~.  Precedence: PZZ, LRP, LP, RP, ALT."""
    spec = h.spec
    if spec.family is not Family.AffineB:
        raise ValueError("classify_family_B needs a type B heap")
    if h.fc_defect() is not None:
        raise NotFC(f"{list(h.labels)} is not an FC heap")
    n = spec.n
    if is_pzz(h):
        return HeapFamily(FamilyTag.PZZ)
    lefts = [j for j in range(2, n + 1) if _left_peak_ok(h, j)]
    rights = [j for j in range(2, n + 1) if _right_peak_ok(h, j)]
    for jl in lefts:
        for jr in rights:
            if jl < jr and _alternating_pairs(h, set(range(jl, jr + 1)), {jl, jr}):
                return HeapFamily(FamilyTag.LRP, jl, jr)
    for jl in lefts:
        if _alternating_pairs(h, set(range(jl, n + 2)), {jl}):
            return HeapFamily(FamilyTag.LP, jl, None)
    for jr in rights:
        if _alternating_pairs(h, set(range(0, jr + 1)), {jr}):
            return HeapFamily(FamilyTag.RP, None, jr)
    if is_alternating(h) and _one_elements_ok(h):
        return HeapFamily(FamilyTag.ALT)
    raise NotFC(f"{list(h.labels)} matches no family")


def _substitute(word: Sequence[int], choices: Sequence[tuple[int, ...]], n: int) -> Word:
    out: list[int] = []
    q = 0
    for x in word:
        if x == n + 1:
            out.extend(choices[q])
            q += 1
        else:
            out.append(x)
    return tuple(out)


def delta_D(h: Heap, word: Sequence[int] | None = None, literal: bool = False) -> set[Heap]:
    """Type D~ heaps obtained from a B~ heap by rewriting its s_{n+1} elements.

    The left-peak heap ``s_{n+1} P(s_n) s_{n+1}`` has both s_{n+1} elements
    separated by two s_n elements, so each end can be rewritten freely just
    like the ends of a pseudo zigzag.  By default it therefore gets nine
    images.  ``literal=True`` applies the alternating rule there instead,
    which yields only two of them.
    """
    spec = h.spec
    n = spec.n
    dspec = CoxeterSpec(Family.AffineD, n)
    w = tuple(h.labels if word is None else word)
    fam = classify_family_B(h)
    both = (n + 1, n + 2)
    count = w.count(n + 1)
    variants: list[list[tuple[int, ...]]] = []
    if count == 0:
        variants = [[]]
    elif fam.tag in (FamilyTag.RP, FamilyTag.LRP):
        variants = [[both] * count]
    elif fam.tag is FamilyTag.PZZ or (
        not literal and fam.tag is FamilyTag.LP and fam.j_left == n and count == 2
    ):
        first = [both, (n + 1,), (n + 2,)] if w[0] == n + 1 else [both]
        last = [both, (n + 1,), (n + 2,)] if w[-1] == n + 1 else [both]
        for a in first:
            for b in last:
                if count == 1:
                    if a != both and b != both:
                        continue
                    choice = [a if a != both else b]
                else:
                    choice = [a] + [both] * (count - 2) + [b]
                variants.append(choice)
    elif count == 1:
        variants = [[both], [(n + 1,)], [(n + 2,)]]
    else:
        alt = [(n + 1,), (n + 2,)]
        variants = [[alt[(q + r) % 2] for q in range(count)] for r in (0, 1)]
    out = set()
    for choice in variants:
        dw = _substitute(w, choice, n)
        out.add(heap_from_word(dw, dspec, check=False))
    return out


def contract_D(h: Heap) -> Heap:
    """Inverse of the substitution: fold each run of right-fork elements into s_{n+1}."""
    n = h.spec.n
    bspec = CoxeterSpec(Family.AffineB, n)
    out: list[int] = []
    pending = False
    for x in h.labels:
        if x in (n + 1, n + 2):
            if not pending:
                out.append(n + 1)
                pending = True
        else:
            if x == n:
                pending = False
            out.append(x)
    return Heap.from_labels(out, bspec)


def classify_family_D(h: Heap) -> HeapFamily:
    if h.spec.family is not Family.AffineD:
        raise ValueError("classify_family_D needs a type D heap")
    if h.fc_defect() is not None:
        raise NotFC(f"{list(h.labels)} is not an FC heap")
    hb = contract_D(h)
    if hb.fc_defect() is not None:
        raise NotFC(f"{list(h.labels)} contracts to a non-FC heap")
    fam = classify_family_B(hb)
    if h not in delta_D(hb):
        raise NotFC(f"{list(h.labels)} is not in the image of its contraction")
    return fam
