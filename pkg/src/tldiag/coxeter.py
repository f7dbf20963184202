"""Coxeter data for the affine types B~_{n+1} and D~_{n+2}.

Both groups act on boxes with ``n + 2`` nodes.  Generators are the integers
``0..n+1`` (type B) or ``0..n+2`` (type D).  Words are tuples of generator
indices.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

Word = tuple[int, ...]


class Family(str, enum.Enum):
    """The two affine families handled by the library."""

    AffineB = "B"
    AffineD = "D"


class NotReduced(ValueError):
    """Raised when a word is not a reduced expression."""


class NotFC(ValueError):
    """Raised when a reduced word is not fully commutative."""


class ResourceGuard(RuntimeError):
    """Raised when an enumeration frontier grows beyond the configured cap."""


@dataclass(frozen=True)
class CoxeterSpec:
    family: Family
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")

    @classmethod
    def B(cls, n: int) -> "CoxeterSpec":
        return cls(Family.AffineB, n)

    @classmethod
    def D(cls, n: int) -> "CoxeterSpec":
        return cls(Family.AffineD, n)

    @property
    def k(self) -> int:
        """Width of the diagram box."""
        return self.n + 2

    @property
    def rank(self) -> int:
        return self.n + 2 if self.family is Family.AffineB else self.n + 3

    @property
    def generators(self) -> range:
        return range(self.rank)

    def to_json(self) -> dict:
        return {"family": self.family.value, "n": self.n}

    @classmethod
    def from_json(cls, data: dict) -> "CoxeterSpec":
        return cls(Family(data["family"]), int(data["n"]))

    def __str__(self) -> str:
        return f"{self.family.value}~(n={self.n})"


@lru_cache(maxsize=None)
def coxeter_matrix(spec: CoxeterSpec) -> tuple[tuple[int, ...], ...]:
    """Bond orders ``m[s][t]`` as a symmetric tuple-of-tuples."""
    n, r = spec.n, spec.rank
    m = [[2] * r for _ in range(r)]
    for s in range(r):
        m[s][s] = 1

    def bond(s: int, t: int, value: int) -> None:
        m[s][t] = m[t][s] = value

    bond(0, 2, 3)
    bond(1, 2, 3)
    for i in range(2, n):
        bond(i, i + 1, 3)
    if spec.family is Family.AffineB:
        bond(n, n + 1, 4)
    else:
        bond(n, n + 1, 3)
        bond(n, n + 2, 3)
    return tuple(tuple(row) for row in m)


def check_word(w: Iterable[int], spec: CoxeterSpec) -> Word:
    word = tuple(int(x) for x in w)
    for x in word:
        if not 0 <= x < spec.rank:
            raise ValueError(f"generator {x} out of range for {spec}")
    return word


@lru_cache(maxsize=None)
def _cartan(spec: CoxeterSpec) -> tuple[tuple[int, ...], ...]:
    # An integral generalized Cartan matrix realizing the Coxeter matrix:
    # a_st * a_ts = 4 cos^2(pi / m_st).  For the single m=4 bond we put the
    # factor 2 on the root of the end node.
    m = coxeter_matrix(spec)
    r = spec.rank
    a = [[0] * r for _ in range(r)]
    for s in range(r):
        a[s][s] = 2
        for t in range(r):
            if s == t:
                continue
            if m[s][t] == 3:
                a[s][t] = -1
            elif m[s][t] == 4:
                a[s][t] = -2 if s == spec.n + 1 else -1
    return tuple(tuple(row) for row in a)


def is_reduced(w: Sequence[int], spec: CoxeterSpec) -> bool:
    """Root-system test: ``w`` is reduced iff every prefix sends the next simple root positive."""
    a = _cartan(spec)
    r = spec.rank
    # columns of the current group element acting on the root lattice
    mat = [[int(i == j) for j in range(r)] for i in range(r)]
    for s in w:
        col = [mat[i][s] for i in range(r)]
        if any(c < 0 for c in col):
            return False
        # right-multiply by s: column t becomes col_t - a[s][t] * col_s
        for t in range(r):
            coef = a[s][t]
            if coef:
                for i in range(r):
                    mat[i][t] -= coef * col[i]
    return True


def _commutes(m, s: int, t: int) -> bool:
    return m[s][t] == 2


def commutation_class(w: Sequence[int], spec: CoxeterSpec, cap: int | None = None) -> set[Word]:
    """All words reachable from ``w`` by swapping adjacent commuting letters."""
    m = coxeter_matrix(spec)
    start = tuple(w)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for word in frontier:
            for i in range(len(word) - 1):
                s, t = word[i], word[i + 1]
                if s != t and _commutes(m, s, t):
                    other = word[:i] + (t, s) + word[i + 2:]
                    if other not in seen:
                        seen.add(other)
                        nxt.append(other)
        if cap is not None and len(seen) > cap:
            raise ResourceGuard(f"commutation class exceeds {cap} words")
        frontier = nxt
    return seen


def _has_bad_factor(word: Word, m) -> str | None:
    for i in range(len(word) - 1):
        if word[i] == word[i + 1]:
            return "square"
    for i in range(len(word)):
        s = word[i]
        if i + 1 >= len(word):
            break
        t = word[i + 1]
        mst = m[s][t]
        if mst >= 3 and i + mst <= len(word):
            if all(word[i + j] == (s if j % 2 == 0 else t) for j in range(mst)):
                return "braid"
    return None


def is_fully_commutative(w: Sequence[int], spec: CoxeterSpec) -> bool:
    """Stembridge's criterion on the heap: no square and no convex braid chain.

    Raises :class:`NotReduced` when ``w`` is not a reduced expression.
    """
    from .heaps import heap_from_word

    word = check_word(w, spec)
    if heap_from_word(word, spec, check=False).fc_defect() is None:
        return True
    if not is_reduced(word, spec):
        raise NotReduced(f"{list(word)} is not reduced in {spec}")
    return False


def is_fully_commutative_by_class(w: Sequence[int], spec: CoxeterSpec) -> bool:
    """Same answer as :func:`is_fully_commutative`, by exploring the whole commutation class."""
    word = check_word(w, spec)
    if not is_reduced(word, spec):
        raise NotReduced(f"{list(word)} is not reduced in {spec}")
    m = coxeter_matrix(spec)
    for member in commutation_class(word, spec):
        if _has_bad_factor(member, m) is not None:
            return False
    return True


def canonical_word(w: Sequence[int], spec: CoxeterSpec) -> Word:
    """Lexicographically least member of the commutation class of ``w``."""
    from .heaps import heap_from_word

    return heap_from_word(w, spec, check=False).canonical_word()


def enumerate_fc(spec: CoxeterSpec, max_len: int, cap: int | None = None) -> list[list[Word]]:
    """FC elements of length ``<= max_len`` grouped by length.

    Each element is represented by its lexicographically least reduced word.
    The frontier cap defaults to the ``TLDIAG_FC_CAP`` environment variable.
    """
    from .heaps import heap_from_word

    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    if cap is None:
        cap = int(os.environ.get("TLDIAG_FC_CAP", "2000000"))
    levels: list[list[Word]] = [[()]]
    for _ in range(max_len):
        found: set[Word] = set()
        for word in levels[-1]:
            for s in spec.generators:
                if word and word[-1] == s:
                    continue
                h = heap_from_word(word + (s,), spec, check=False)
                if h.fc_defect() is None:
                    found.add(h.canonical_word())
            if len(found) > cap:
                raise ResourceGuard(f"FC frontier exceeds {cap} elements")
        levels.append(sorted(found))
    return levels
