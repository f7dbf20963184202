"""Factorization of admissible diagrams into simple diagrams.

ALT-diagrams are peeled one generator at a time by the cut and paste
operation on a suitable edge.  P-diagrams with several cups use the
K_L/K_R operations (or a cut and paste inside the peak-free part), and
PZZ-diagrams as well as P-diagrams with a single cup are written down
directly as zigzag words.

The edge surgery (which edges are deleted, cut and rejoined) follows the
combinatorial rules.  The way the decorations of the cut edge are shared
between the two new edges is pinned down by three conditions: the result
is admissible, it is one shorter, and multiplying it by the simple diagram
gives back the original with coefficient 1.  Only finitely many splits of
the cut word exist, and exactly one of them passes, which is checked at
run time.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .admissible import (
    NotAdmissible,
    admissibility_violation,
    classify_diagram,
    inner_diagram,
    is_admissible,
    length,
)
from .algebra import InternalAssertion, generator_of_edge, simple_diagram, theta_diagram
from .coxeter import CoxeterSpec, Family, NotFC, NotReduced, Word
from .diagrams import (
    CIRC,
    DOT,
    TRI,
    Diagram,
    DiagramError,
    canonical_key,
    cyclic_form,
    edge_name,
    is_left,
    make_diagram,
    multiply_diagrams,
    reduce_cyclic,
    reduce_word,
)
from .heaps import FamilyTag


class NotALT(ValueError):
    """The operation needs an ALT-diagram."""


class IdentityDiagram(ValueError):
    """The identity diagram has no suitable edge."""


class NotSuitable(ValueError):
    """No admissible cut and paste exists for this edge."""


class PreconditionNotMet(ValueError):
    """The K-operation does not apply; factor the inner diagram instead."""


class WrongClass(ValueError):
    """The diagram is not of the class the operation handles."""


class EdgeForm(str, enum.Enum):
    PLAIN = "⌣"
    DOTTED = "•⌣"
    CIRCLED = "○⌣"


class EdgeType(str, enum.Enum):
    U_L = "U_L"
    U_R = "U_R"
    N = "N"
    P_L = "P_L"
    P_R = "P_R"
    S_L = "S_L"
    S_R = "S_R"
    P_R_DOT = "P_R•"
    P_L_CIRC = "P_L○"
    BASIC_A = "basic-a"
    BASIC_B = "basic-b"
    BASIC_C = "basic-c"
    BASIC_D = "basic-d"
    K_L = "K_L"
    K_R = "K_R"


# A neighbor is either an edge triple or ("loop", word).
Neighbor = tuple


@dataclass(frozen=True)
class SuitableEdge:
    edge: tuple
    form: EdgeForm
    type: EdgeType
    neighbor: Neighbor

    @property
    def left(self) -> int:
        return min(self.edge[0], self.edge[1])

    def describe(self) -> str:
        if self.neighbor[0] == "loop":
            nb = "loop(" + "".join({DOT: "•", CIRC: "○", TRI: "△"}[x] for x in self.neighbor[1]) + ")"
        else:
            nb = edge_name(self.neighbor)
        return f"{edge_name(self.edge)} {self.form.value} type {self.type.value}, neighbor {nb}"


@dataclass
class Step:
    generator: int
    edge: SuitableEdge | None
    before: Diagram
    after: Diagram | None
    note: str = ""

    def to_json(self) -> dict:
        out = {"generator": self.generator, "note": self.note}
        if self.edge is not None:
            out["edge"] = self.edge.describe()
            out["type"] = self.edge.type.value
        if self.after is not None:
            out["after"] = self.after.to_json()
        return out


@dataclass
class Factorization:
    word: Word
    steps: list[Step] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"word": list(self.word), "steps": [s.to_json() for s in self.steps]}


def _spec(d: Diagram) -> CoxeterSpec:
    return CoxeterSpec(d.family, d.k - 2)


def _rmarks(family: Family) -> tuple[str, ...]:
    return (CIRC, TRI) if family is Family.AffineB else (CIRC,)


# ---------------------------------------------------------------------------
# simple edges, types and neighbors


def simple_edges(d: Diagram) -> list[tuple[tuple, EdgeForm]]:
    """North edges {i, i+1} that are the cup of a simple diagram, left to right."""
    spec = _spec(d)
    out = []
    for e in sorted(d.north_edges(), key=lambda e: e[0]):
        u, v, dec = e
        if v != u + 1:
            continue
        try:
            generator_of_edge(spec, u, dec)
        except ValueError:
            continue
        if dec == (DOT,):
            out.append((e, EdgeForm.DOTTED))
        elif dec == (CIRC,):
            out.append((e, EdgeForm.CIRCLED))
        else:
            out.append((e, EdgeForm.PLAIN))
    return out


def generator_of(d: Diagram, e) -> int:
    return generator_of_edge(_spec(d), e[0], e[2])


def is_basic(d: Diagram) -> bool:
    """Only simple edges, plain verticals, south cups and loops."""
    simple = {e[:2] for e, _ in simple_edges(d)}
    for e in d.edges:
        u, v, dec = e
        if u > 0 and v > 0:
            if (u, v) not in simple:
                return False
        elif u > 0 > v:
            if u != -v or dec:
                return False
    return True


def _edge_types(d: Diagram, e) -> list[tuple[EdgeType, Neighbor]]:
    """Every type the simple edge has, each with its neighbor."""
    i = e[0]
    rm = set(_rmarks(d.family))
    out = []
    north = d.north_edges()
    for f in north:
        if f[0] == i + 2 and DOT in f[2]:
            out.append((EdgeType.U_R, f))
        if f[1] == i - 1 and rm & set(f[2]):
            out.append((EdgeType.U_L, f))
    enclosing = [f for f in north if f[0] < i and f[1] > i + 1]
    if enclosing:
        out.append((EdgeType.N, max(enclosing, key=lambda f: f[0])))
    for f in d.propagating():
        u, v = f[0], -f[1]
        if u == i + 2 and v <= i:
            out.append((EdgeType.P_R, f))
        if u == i - 1 and v >= i + 1:
            out.append((EdgeType.P_L, f))
        if u == i + 2 and v == i + 2 and DOT in f[2]:
            out.append((EdgeType.S_R, f))
        if u == i - 1 and v == i - 1 and rm & set(f[2]):
            out.append((EdgeType.S_L, f))
    if i == 1 and not e[2] and (DOT,) in d.loops:
        try:
            f = d.edge_at(3)
        except KeyError:
            f = None
        if f is not None and f[:2] == (3, -1) and DOT not in f[2]:
            out.append((EdgeType.P_R_DOT, ("loop", (DOT,))))
    if d.family is Family.AffineD and i == d.k - 1 and not e[2] and (CIRC,) in d.loops:
        try:
            f = d.edge_at(d.k - 2)
        except KeyError:
            f = None
        if f is not None and f[:2] == (d.k - 2, -d.k) and CIRC not in f[2]:
            out.append((EdgeType.P_L_CIRC, ("loop", (CIRC,))))
    kinds = {t for t, _ in out}
    if EdgeType.P_R_DOT in kinds:
        out = [x for x in out if x[0] is not EdgeType.P_R]
    if EdgeType.P_L_CIRC in kinds:
        out = [x for x in out if x[0] is not EdgeType.P_L]
    return out


def _south_crossing(d: Diagram, i: int) -> list:
    """South edges crossed by the vertical line i+1/2, innermost first."""
    out = []
    for f in d.south_edges():
        a, b = sorted((abs(f[0]), abs(f[1])))
        if a <= i < b:
            out.append(f)
    out.sort(key=lambda f: abs(abs(f[0]) - abs(f[1])))
    return out


def _basic_types(d: Diagram, e) -> list[tuple[EdgeType, Neighbor]]:
    i = e[0]
    mixed = [lp for lp in d.loops if len(set(lp)) > 1]
    if mixed:
        return [(EdgeType.BASIC_A, ("loop", sorted(mixed)[0]))]
    if (DOT,) in d.loops:
        return [(EdgeType.BASIC_B, ("loop", (DOT,)))] if i == 1 else []
    if (CIRC,) in d.loops and d.family is Family.AffineD:
        return [(EdgeType.BASIC_B, ("loop", (CIRC,)))] if i == d.k - 1 else []
    if d.loops:
        return []
    crossing = _south_crossing(d, i)
    south_decorated = any(f[2] for f in d.south_edges())
    if not south_decorated:
        return [(EdgeType.BASIC_C, crossing[0])] if crossing else []
    dotted = sorted((f for f in d.south_edges() if DOT in f[2]), key=lambda f: abs(f[0]))
    rmarked = sorted((f for f in d.south_edges() if set(f[2]) - {DOT}), key=lambda f: abs(f[0]))
    special = set()
    if dotted:
        special.add(dotted[-1][:2])
    if rmarked:
        special.add(rmarked[0][:2])
    for f in crossing:
        both = DOT in f[2] and set(f[2]) - {DOT}
        if both or f[:2] in special:
            return [(EdgeType.BASIC_D, f)]
    return []


def suitable_candidates(d: Diagram) -> list[SuitableEdge]:
    """Every (simple edge, type, neighbor) triple the definition allows, leftmost edge first."""
    out = []
    basic = is_basic(d)
    for e, form in simple_edges(d):
        kinds = _basic_types(d, e) if basic else _edge_types(d, e)
        for t, nb in kinds:
            out.append(SuitableEdge(e, form, t, nb))
    return out


def suitable_edge(d: Diagram) -> SuitableEdge:
    """The leftmost suitable edge of an ALT-diagram whose cut and paste succeeds."""
    if d.is_identity():
        raise IdentityDiagram("the identity has no suitable edge")
    if classify_diagram(d).tag is not FamilyTag.ALT:
        raise NotALT("suitable edges are defined for ALT-diagrams")
    cands = suitable_candidates(d)
    for se in cands:
        try:
            _paste(d, se)
        except NotSuitable:
            continue
        return se
    raise InternalAssertion(f"no suitable edge works in\n{d}")


# ---------------------------------------------------------------------------
# the cut and paste search


def _read_from(e, node: int) -> tuple[str, ...]:
    """Decorations of an edge read starting at ``node``."""
    return e[2] if e[0] == node else e[2][::-1]


def _split_candidates(word: tuple[str, ...], family: Family) -> Iterator[tuple[tuple, tuple]]:
    extras = [()] + [(x,) for x in (DOT,) + _rmarks(family)]
    seen = set()
    cuts = [(s, s) for s in range(len(word) + 1)] + [(s, s + 1) for s in range(len(word))]
    for s, t in cuts:
        for x in extras:
            for y in extras:
                a, b = word[:s] + x, y + word[t:]
                if (a, b) in seen:
                    continue
                seen.add((a, b))
                if reduce_word(a, family)[0] == a and reduce_word(b, family)[0] == b:
                    yield a, b


def _word_matches(a, m, b, target, family: Family) -> bool:
    for mid in ((m,) if m else (), ()):
        w, s = reduce_word(a + mid + b, family)
        if s == 1 and w == target:
            return True
    return False


def _interleavings(groups: list[tuple[int, tuple[str, ...]]]) -> Iterator[tuple[tuple[int, str], ...]]:
    """All merges of the owners' words that keep each word's order."""
    items = [(o, list(w)) for o, w in groups if w]
    total = sum(len(w) for _, w in items)
    seen = set()

    def rec(pos, acc):
        if len(acc) == total:
            t = tuple(acc)
            if t not in seen:
                seen.add(t)
                yield t
            return
        for idx, (o, w) in enumerate(items):
            if pos[idx] < len(w):
                pos[idx] += 1
                acc.append((o, w[pos[idx] - 1]))
                yield from rec(pos, acc)
                acc.pop()
                pos[idx] -= 1

    yield from rec([0] * len(items), [])


def _build(d: Diagram, edges, loops) -> Iterator[Diagram]:
    """Diagrams with the given edges and loops, with every height order when there is one cup."""
    try:
        plain = make_diagram(d.family, d.k, [(u, v, ()) for u, v, _ in edges])
    except DiagramError:
        return
    if plain.a != 1:
        yield make_diagram(d.family, d.k, edges, loops)
        return
    if any(len(lp) != 1 for lp in loops):
        return
    oriented = make_diagram(d.family, d.k, edges).edges
    groups = [(u, w) for u, v, w in oriented if u > 0 > v]
    groups += [(0, lp) for lp in loops]
    for seq in _interleavings(groups):
        yield make_diagram(d.family, d.k, edges, loops, seq)


def _restore_absorbed(d: Diagram, rest, mark: str) -> Iterator[list]:
    """Every way to put the mark back at one end of some of the edges."""
    choices = []
    for u, v, w in rest:
        opts = [w]
        if not w or w[0] != mark:
            opts.append((mark,) + w)
        if w and w[-1] != mark:
            opts.append(w + (mark,))
        choices.append([(u, v, x) for x in opts])
    for combo in itertools.product(*choices):
        yield list(combo)


def _paste(d: Diagram, se: SuitableEdge) -> Diagram:
    """Cut and paste: delete e, cut its neighbor, rejoin to i and i+1, split the decorations."""
    fam = d.family
    e = se.edge
    i = se.left
    g = generator_of(d, e)
    m = {EdgeForm.DOTTED: DOT, EdgeForm.CIRCLED: CIRC}.get(se.form)
    target_len = length(d) - 1
    rest = [f for f in d.edges if f[:2] != e[:2]]
    loops = list(d.loops)
    options: list[tuple[list, list]] = []
    nb = se.neighbor
    if nb[0] == "loop":
        loops.remove(tuple(nb[1]))
        lw = tuple(nb[1])
        marks = (DOT,) + _rmarks(fam)
        for size in range(len(lw) + 2):
            for w in itertools.product(marks, repeat=size):
                if reduce_word(w, fam)[0] != w:
                    continue
                cyc, s2 = reduce_cyclic(w + ((m,) if m else ()), fam)
                if s2 == 1 and cyc and cyclic_form(cyc) == cyclic_form(lw):
                    options.append(([(i, i + 1, w)], []))
    else:
        f = tuple(nb)
        rest = [x for x in rest if x[:2] != f[:2]]
        p, q = f[0], f[1]
        for x, y in ((i, i + 1), (i + 1, i)):
            word = f[2]
            for a, b in _split_candidates(word, fam):
                if not _word_matches(a, m, b, word, fam):
                    continue
                # a is read from p to x, b from y to q
                e1 = (p, x, a)
                e2 = (y, q, b)
                options.append(([e1, e2], []))
    rests = [rest]
    if nb[0] == "loop" and len(nb[1]) == 1:
        # the loop absorbed copies of its mark elsewhere; they may come back
        rests = list(_restore_absorbed(d, rest, nb[1][0]))
    found = {}
    for new_edges, r_edges in itertools.product([o[0] for o in options], rests):
        edges = r_edges + new_edges
        for cand in _build(d, edges, loops):
            key = canonical_key(cand)
            if key in found:
                continue
            if admissibility_violation(cand) is not None:
                continue
            if length(cand) != target_len:
                continue
            r = multiply_diagrams(simple_diagram(_spec(d), g), cand)
            if (r.scalar, r.delta) != (1, 0) or canonical_key(r.diagram) != canonical_key(d):
                continue
            found[key] = cand
    if not found:
        raise NotSuitable(f"no admissible cut and paste for {se.describe()}")
    if len(found) > 1:
        raise InternalAssertion(f"{len(found)} diagrams satisfy the cut and paste conditions for {se.describe()}")
    return next(iter(found.values()))


def cut_and_paste(d: Diagram, e: SuitableEdge | None = None) -> tuple[int, Diagram]:
    """(generator g, D') with D = D_g D' and length(D') = length(D) - 1."""
    if e is None:
        e = suitable_edge(d)
    return generator_of(d, e.edge), _paste(d, e)


# ---------------------------------------------------------------------------
# P-diagrams


def _k_edge(d: Diagram) -> SuitableEdge:
    cls = classify_diagram(d)
    if cls.tag not in (FamilyTag.LP, FamilyTag.RP, FamilyTag.LRP):
        raise WrongClass("K-operations apply to P-diagrams")
    if d.a == 1:
        raise WrongClass("P-diagrams with one cup are factored in closed form")
    basic = is_basic(inner_diagram(d, cls)) or is_basic(inner_diagram(d, cls, complete=False))
    if cls.tag in (FamilyTag.LP, FamilyTag.LRP):
        j = cls.j_left
        e = next((x for x, _ in simple_edges(d) if x[0] == j), None)
        if e is not None and not e[2]:
            types = {t for t, _ in _edge_types(d, e)}
            if basic or EdgeType.P_R in types:
                f = d.edge_at(j - 1)
                return SuitableEdge(e, EdgeForm.PLAIN, EdgeType.K_L, f)
    if cls.tag in (FamilyTag.RP, FamilyTag.LRP):
        j = cls.j_right
        e = next((x for x, _ in simple_edges(d) if x[1] == j), None)
        if e is not None and not e[2]:
            types = {t for t, _ in _edge_types(d, e)}
            if basic or EdgeType.P_L in types:
                f = d.edge_at(j + 1)
                return SuitableEdge(e, EdgeForm.PLAIN, EdgeType.K_R, f)
    raise PreconditionNotMet("the edge at the peak is not simple enough for a K-operation")


def k_operation(d: Diagram) -> tuple[int, Diagram]:
    """K_L (or K_R): delete the edge at the peak, cut the adjacent vertical and rejoin."""
    se = _k_edge(d)
    return generator_of(d, se.edge), _paste(d, se)


def _inner_suitable(d: Diagram) -> SuitableEdge:
    """A suitable edge of the inner diagram, lifted back to D."""
    cls = classify_diagram(d)
    shift = cls.j_left - 1

    def lift(x: int) -> int:
        return x + shift if x > 0 else x - shift

    def lift_edge(f):
        for cand in d.edges:
            if {cand[0], cand[1]} == {lift(f[0]), lift(f[1])}:
                return cand
        raise KeyError(f)

    forms = dict((e[:2], form) for e, form in simple_edges(d))
    cands = suitable_candidates(inner_diagram(d, cls)) + suitable_candidates(inner_diagram(d, cls, complete=False))
    for se in cands:
        try:
            e = lift_edge(se.edge)
            nb = se.neighbor if se.neighbor[0] == "loop" else lift_edge(se.neighbor)
        except KeyError:
            continue
        if e[:2] not in forms:
            continue
        lifted = SuitableEdge(e, forms[e[:2]], se.type, nb)
        try:
            _paste(d, lifted)
        except NotSuitable:
            continue
        return lifted
    raise InternalAssertion(f"no suitable edge in the inner diagram of\n{d}")


# ---------------------------------------------------------------------------
# closed forms for PZZ-diagrams and single-cup P-diagrams


def _walk_words(spec: CoxeterSpec, size: int) -> Iterator[Word]:
    """Factors of the zigzag walk of the given length, with every end variant."""
    n = spec.n
    if spec.family is Family.AffineB:
        right_full, right_ends = (n + 1,), [(n + 1,)]
    else:
        right_full, right_ends = (n + 1, n + 2), [(n + 1, n + 2), (n + 1,), (n + 2,)]
    left_full, left_ends = (0, 1), [(0, 1), (1, 0), (0,), (1,)]
    cols = ["L"] + list(range(2, n + 1)) + ["R"]
    for start in range(len(cols)):
        for direction in (1, -1):
            if (start == 0 and direction == -1) or (start == len(cols) - 1 and direction == 1):
                continue
            visits = []
            pos, dr = start, direction
            while len(visits) < size:
                visits.append(cols[pos])
                if pos + dr < 0 or pos + dr >= len(cols):
                    dr = -dr
                pos += dr
            for nvis in range(1, len(visits) + 1):
                seq = visits[:nvis]
                firsts = left_ends if seq[0] == "L" else right_ends if seq[0] == "R" else [(seq[0],)]
                lasts = left_ends if seq[-1] == "L" else right_ends if seq[-1] == "R" else [(seq[-1],)]
                middle = []
                for c in seq[1:-1]:
                    middle.extend(left_full if c == "L" else right_full if c == "R" else (c,))
                if nvis == 1:
                    for a in firsts:
                        if len(a) == size:
                            yield tuple(a)
                    continue
                for a in firsts:
                    for b in lasts:
                        w = tuple(a) + tuple(middle) + tuple(b)
                        if len(w) == size:
                            yield w


def factor_pzz_closed_form(d: Diagram) -> Word:
    """Zigzag word of a PZZ-diagram or of a P-diagram with one cup."""
    cls = classify_diagram(d)
    if not (cls.tag is FamilyTag.PZZ or (d.a == 1 and cls.tag in (FamilyTag.LP, FamilyTag.RP, FamilyTag.LRP))):
        raise WrongClass(f"{cls.tag.value}-diagram with a={d.a} has no closed form")
    spec = _spec(d)
    size = length(d)
    key = canonical_key(d)
    north = d.north_edges()[0]
    first = {north[0]} if north[0] > 1 else {0, 1}
    if north[1] == d.k:
        first = {spec.rank - 1, spec.n + 1}
    for w in _walk_words(spec, size):
        if w[0] not in first and not (w[0] in (0, 1) and 1 in first):
            continue
        try:
            if canonical_key(theta_diagram(w, spec)) == key:
                return w
        except (NotFC, NotReduced, InternalAssertion):
            continue
    raise InternalAssertion(f"no zigzag word of length {size} gives\n{d}")


# ---------------------------------------------------------------------------
# driver


def factorize_trace(d: Diagram, verify: bool = False) -> Factorization:
    """Factor an admissible diagram, recording every step."""
    msg = admissibility_violation(d)
    if msg is not None:
        raise NotAdmissible(msg)
    original = d
    word: list[int] = []
    steps: list[Step] = []
    while not d.is_identity():
        cls = classify_diagram(d)
        if cls.tag is FamilyTag.PZZ or (d.a == 1 and cls.tag is not FamilyTag.ALT):
            tail = factor_pzz_closed_form(d)
            steps.append(Step(tail[0], None, d, None, f"closed form {cls.tag.value}: {list(tail)}"))
            word.extend(tail)
            break
        if cls.tag is FamilyTag.ALT:
            se = suitable_edge(d)
            note = "cut and paste"
        else:
            try:
                se = _k_edge(d)
                _paste(d, se)
                note = se.type.value
            except (PreconditionNotMet, NotSuitable):
                se = _inner_suitable(d)
                note = "cut and paste in the inner diagram"
        g = generator_of(d, se.edge)
        nxt = _paste(d, se)
        steps.append(Step(g, se, d, nxt, note))
        word.append(g)
        d = nxt
    out = Factorization(tuple(word), steps)
    if verify:
        spec = _spec(original)
        if len(out.word) != length(original):
            raise InternalAssertion("factorization length differs from the diagram length")
        if canonical_key(theta_diagram(out.word, spec)) != canonical_key(original):
            raise InternalAssertion("factorization does not multiply back to the diagram")
    return out


def factorize(d: Diagram, spec: CoxeterSpec | None = None, verify: bool = False) -> Word:
    """A reduced FC word w with theta(w) == d."""
    if spec is not None and (spec.family is not d.family or spec.k != d.k):
        raise ValueError("diagram and Coxeter data do not match")
    return factorize_trace(d, verify).word
