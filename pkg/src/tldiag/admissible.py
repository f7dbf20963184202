"""Admissible diagrams: the admissibility test, the three diagram families,
edge weights, crossing counts and the length function.

Family B uses the alphabet {dot, circ, tri}; the R-decoration counted by
weights and by the zigzag parameters is the triangle, and circles are
ignored.  Family D uses {dot, circ}; the circle plays the triangle's role
everywhere, and the right zigzag parameter counts circle loops.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .coxeter import CoxeterSpec, Family
from .diagrams import CIRC, DOT, TRI, Diagram, DiagramError, is_left, make_diagram, reduce_word
from .heaps import FamilyTag


class NotAdmissible(ValueError):
    """Raised when an operation needs an admissible diagram."""


class PZZType(str, enum.Enum):
    """Which mark is highest, then which is lowest (R: right mark, L: dot loop)."""

    RR = "RR"
    RL = "RL"
    LR = "LR"
    LL = "LL"

    def symbol(self, family: Family) -> str:
        r = "△" if family is Family.AffineB else "○"
        return "⟨" + "".join(r if c == "R" else "•" for c in self.value) + "⟩"


@dataclass(frozen=True)
class AdmissibleClass:
    tag: FamilyTag
    pzz_type: PZZType | None = None
    l: int = 0
    r: int = 0
    i: int | None = None
    j: int | None = None
    j_left: int | None = None
    j_right: int | None = None

    def to_json(self) -> dict:
        out = {"tag": self.tag.value}
        for name in ("l", "r", "i", "j", "j_left", "j_right"):
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        if self.pzz_type is not None:
            out["pzz_type"] = self.pzz_type.value
        return out


def spec_of(d: Diagram) -> CoxeterSpec:
    return CoxeterSpec(d.family, d.k - 2)


def _rmark(family: Family) -> str:
    return TRI if family is Family.AffineB else CIRC


# ---------------------------------------------------------------------------
# weights and crossings


def _weight_word(decor, family: Family) -> tuple[str, ...]:
    if family is Family.AffineB:
        return tuple(x for x in decor if x != CIRC)
    return tuple(decor)


def word_weight(word, lo: int, hi: int, n: int, crossed: bool) -> int:
    """Weight of an alternating dot/R word on an edge with endpoints ``lo <= hi``.

    ``crossed`` marks a propagating edge whose north end lies to the right of
    its south end; the two mixed words then swap their formulas.
    """
    word = tuple(word)
    if not word:
        return 0
    if any(a == b or is_left(a) == is_left(b) for a, b in zip(word, word[1:])):
        raise DiagramError(f"weight undefined for non-alternating word {word}")
    first_dot = is_left(word[0])
    even = len(word) % 2 == 0
    k = len(word) // 2 if even else (len(word) - 1) // 2
    if not even and first_dot:
        return lo - 1 + k * (n + 1)
    if not even:
        return n + 2 - hi + k * (n + 1)
    if first_dot:
        return k * (n + 1) if crossed else k * (n + 1) - hi + lo
    return k * (n + 1) - hi + lo if crossed else k * (n + 1)


def edge_weight(e, d: Diagram, n: int | None = None) -> int:
    """Weight of a non-loop edge ``(u, v, decor)`` of ``d``; ``n`` defaults to k-2."""
    n = d.k - 2 if n is None else n
    u, v, decor = e
    word = _weight_word(decor, d.family)
    a, b = abs(u), abs(v)
    if u > 0 > v:
        # north end a, south end b
        if a <= b:
            return word_weight(word, a, b, n, False)
        return word_weight(word, b, a, n, True)
    return word_weight(word, min(a, b), max(a, b), n, False)


def loop_weight(loop, family: Family, n: int) -> int:
    marks = set(_weight_word(loop, family))
    if not marks:
        return 0
    if len(marks) == 2:
        return n + 1
    return 1


def total_weight(d: Diagram) -> int:
    n = d.k - 2
    w = sum(edge_weight(e, d, n) for e in d.edges)
    w += sum(loop_weight(lp, d.family, n) for lp in d.loops)
    return w


def nu_counts(d: Diagram) -> list[int]:
    """``nu[i-1]`` counts edges crossing the vertical line i+1/2, for i = 1..k-1."""
    nu = [0] * (d.k - 1)
    for u, v, _ in d.edges:
        a, b = sorted((abs(u), abs(v)))
        for i in range(a, b):
            nu[i - 1] += 1
    return nu


def nu_total(d: Diagram) -> int:
    return sum(nu_counts(d))


# ---------------------------------------------------------------------------
# classification


def _is_plain_vertical(d: Diagram, i: int) -> bool:
    return d.partner(i) == -i and not d.edge_at(i)[2]


def loop_counts(d: Diagram) -> dict[str, int]:
    """Number of loops of each kind: ``dot``, ``r`` (single R-mark) and ``mixed``."""
    out = {"dot": 0, "r": 0, "mixed": 0}
    for lp in d.loops:
        s = set(lp)
        if s == {DOT}:
            out["dot"] += 1
        elif DOT in s:
            out["mixed"] += 1
        else:
            out["r"] += 1
    return out


def _left_run(d: Diagram) -> int:
    j = 1
    while j <= d.k and _is_plain_vertical(d, j):
        j += 1
    return j


def _right_run(d: Diagram, skip_last: bool) -> int:
    j = d.k - 1 if skip_last else d.k
    while j >= 1 and _is_plain_vertical(d, j):
        j -= 1
    return j


def _pzz_params(d: Diagram) -> tuple[int, int]:
    lc = loop_counts(d)
    l = lc["dot"]
    if d.family is Family.AffineB:
        props = d.propagating()
        r = sum(1 for x in props[-1][2] if x == TRI) if props else 0
    else:
        r = lc["r"]
    return l, r


def _pzz_type(d: Diagram) -> PZZType:
    hs = d.heights or ()
    rm = _rmark(d.family)
    props = d.propagating()
    right_owner = props[-1][0]
    dots = [p for p, (o, x) in enumerate(hs) if o == 0 and x == DOT]
    if d.family is Family.AffineB:
        rs = [p for p, (o, x) in enumerate(hs) if o == right_owner and x == rm]
    else:
        rs = [p for p, (o, x) in enumerate(hs) if o == 0 and x == rm]
    # first letter: which mark is highest; second letter: which mark is lowest
    top = "R" if rs[0] < dots[0] else "L"
    bottom = "R" if rs[-1] > dots[-1] else "L"
    return PZZType(top + bottom)


def _zigzag_count(d: Diagram, ptype: PZZType, r: int, i: int, j: int) -> int:
    """Right marks that come from a genuine turn of the zigzag.

    In family D a single pass through the right fork already leaves a circle
    loop.  When that loop is the highest mark and the north cup sits at
    {n+1, n+2} (or the lowest mark with the south cap there) it records the
    start (or end) of the word rather than a turn, so it is not counted.
    """
    if d.family is Family.AffineB:
        return r
    end = d.k - 1
    if ptype.value[0] == "R" and i == end:
        r -= 1
    if ptype.value[1] == "R" and j == end:
        r -= 1
    return r


def classify_diagram(d: Diagram) -> AdmissibleClass:
    """Family of an admissible diagram (PZZ, then P, else ALT)."""
    k = d.k
    fam = d.family
    if d.a == 1:
        l, r = _pzz_params(d)
        if l >= 1 and r >= 1:
            north = d.north_edges()[0]
            south = d.south_edges()[0]
            i = min(north[0], north[1])
            j = min(-south[0], -south[1])
            ptype = _pzz_type(d)
            if _zigzag_count(d, ptype, r, i, j) >= 1:
                return AdmissibleClass(FamilyTag.PZZ, ptype, l, r, i, j)
    lc = loop_counts(d)
    left_ok = lc["dot"] == 1 and lc["mixed"] == 0
    jl = _left_run(d) if left_ok else 1
    left = left_ok and jl > 1
    if fam is Family.AffineB:
        last = d.edge_at(k)
        right_ok = d.partner(k) == -k and last[2] == (TRI,)
        jr = _right_run(d, True) if right_ok else k
        right = right_ok and jr < k
    else:
        right_ok = lc["r"] == 1 and lc["mixed"] == 0
        jr = _right_run(d, False) if right_ok else k
        right = right_ok and jr < k
    if left and right and d.a > 1:
        return AdmissibleClass(FamilyTag.LRP, j_left=jl, j_right=jr)
    if left:
        return AdmissibleClass(FamilyTag.LP, j_left=jl, j_right=k)
    if right:
        return AdmissibleClass(FamilyTag.RP, j_left=1, j_right=jr)
    return AdmissibleClass(FamilyTag.ALT)


# ---------------------------------------------------------------------------
# inner diagram and length


def inner_diagram(d: Diagram, cls: AdmissibleClass | None = None, complete: bool = True) -> Diagram:
    """The diagram between the verticals at j_left-1 and j_right+1, completed with circles.

    The defining loop (the single dot loop on the left, the single circle loop
    on the right in family D) and the right triangle vertical (family B) lie
    outside the box and are dropped.  A circle is appended to the edges at the
    rightmost north and south nodes when missing.
    """
    cls = cls or classify_diagram(d)
    if cls.tag not in (FamilyTag.LP, FamilyTag.RP, FamilyTag.LRP):
        raise ValueError("inner diagram is defined for P-diagrams only")
    jl, jr = cls.j_left, cls.j_right
    shift = jl - 1
    size = jr - jl + 1
    fam = d.family

    def rel(x: int) -> int:
        return x - shift if x > 0 else x + shift

    edges = []
    for u, v, dec in d.edges:
        if jl <= abs(u) <= jr:
            edges.append([rel(u), rel(v), list(dec)])
    loops = [list(lp) for lp in d.loops]
    if cls.tag in (FamilyTag.LP, FamilyTag.LRP):
        loops.remove([DOT])
    if fam is Family.AffineD and cls.tag in (FamilyTag.RP, FamilyTag.LRP):
        loops.remove([CIRC])
    for node in (size, -size) if complete else ():
        for e in edges:
            if node in (e[0], e[1]) and CIRC not in e[2] and not _split_pair(e[2]):
                # the circle is the last mark read towards the rightmost node
                if e[1] == node:
                    e[2].append(CIRC)
                else:
                    e[2].insert(0, CIRC)
    heights = None
    if d.heights is not None:
        kept = {rel(u) for u, v, _ in d.edges if jl <= abs(u) <= jr and u > 0 > v}
        heights = []
        for o, x in d.heights:
            if o == 0:
                heights.append((0, x))
            elif rel(o) in kept:
                heights.append((rel(o), x))
    return make_diagram(fam, size, [tuple(e[:2]) + (tuple(e[2]),) for e in edges], [tuple(lp) for lp in loops], heights)


def length(d: Diagram, spec: CoxeterSpec | None = None) -> int:
    """Length of an admissible diagram."""
    spec = spec or spec_of(d)
    if d.is_identity():
        return 0
    cls = classify_diagram(d)
    n = spec.n
    if cls.tag is FamilyTag.ALT:
        return alt_length(d)
    if cls.tag is FamilyTag.PZZ:
        i, j, l, r = cls.i, cls.j, cls.l, cls.r
        extra = l if d.family is Family.AffineB else l + r
        base = {
            PZZType.RR: 3 - i - j + (l + r + 1) * n,
            PZZType.RL: 1 - i + j + (l + r) * n,
            PZZType.LR: 1 + i - j + (l + r) * n,
            PZZType.LL: i + j - 1 + (l + r - 1) * n,
        }[cls.pzz_type]
        return base + extra
    inner = inner_length(inner_diagram(d, cls))
    jl, jr = cls.j_left, cls.j_right
    bonus = 0 if d.family is Family.AffineB else 1
    if cls.tag is FamilyTag.LP:
        return 2 * jl - 1 + inner
    if cls.tag is FamilyTag.RP:
        return 2 * n - 2 * jr + 4 + bonus + inner
    return 2 * n + 2 * jl - 2 * jr + 3 + bonus + inner


def _split_pair(decor) -> bool:
    return len(decor) == 2 and decor[0] == decor[1]


def inner_length(inner: Diagram) -> int:
    """Length of an inner diagram.

    This is the ALT length, except for one degenerate shape.  When the peak
    sits next to a fork, the inner box is 3 nodes wide and its propagating
    edge keeps two height-separated copies of one mark (the object that
    separated them lay outside the box).  The weight table has no entry for
    such a pair; it is given the weight n+1 of one full pass across the box,
    which is what the word length requires.
    """
    n = inner.k - 2
    nu = nu_total(inner)
    w = sum(loop_weight(lp, inner.family, n) for lp in inner.loops)
    for e in inner.edges:
        if e[0] > 0 > e[1] and _split_pair(e[2]):
            w += n + 1
        else:
            w += edge_weight(e, inner, n)
    return nu // 2 + w


def alt_length(d: Diagram) -> int:
    nu = nu_total(d)
    if nu % 2:
        raise DiagramError("odd crossing count")
    return nu // 2 + total_weight(d)


# ---------------------------------------------------------------------------
# admissibility


def _alternates(word) -> bool:
    return all(is_left(a) != is_left(b) for a, b in zip(word, word[1:]))


def _is_irreducible(d: Diagram) -> bool:
    from .diagrams import canonical_key, reduce

    r = reduce(d)
    return (r.scalar, r.delta) == (1, 0) and canonical_key(r.diagram) == canonical_key(d)


def _mixed_loop(lp, family: Family) -> bool:
    r = TRI if family is Family.AffineB else CIRC
    return len(lp) >= 2 and len(lp) % 2 == 0 and _alternates(lp) and set(lp) == {DOT, r}


def _ends_rule(n_marks: int, top: bool, bottom: bool, single: bool, upper: bool, lower: bool, others: bool) -> str | None:
    """Placement of the marks facing an end cup/cap.

    ``upper``/``lower`` say whether the cup/cap at this end of the box carries
    its mark; ``top``/``bottom`` whether the propagating edge's extreme mark is
    the highest/lowest entry of the height order.  A marked cup forces the
    matching mark on top, a marked cap forces it at the bottom.  With both
    marked, either both extremes are marked or no mark of the other side
    (``others``) occurs at all.
    """
    if n_marks == 0:
        if upper != lower:
            return "end mark missing under a decorated cup or cap"
        if upper and others:
            return "decorated cup and cap with marks of the other side between them"
        return None
    if single:
        return None if upper != lower else "lone end mark needs exactly one decorated cup or cap"
    if n_marks == 1:
        if top and upper and not lower:
            return None
        if bottom and lower and not upper:
            return None
        return "end mark does not match the decorated cup or cap"
    if n_marks == 2 and top and bottom and upper and lower:
        return None
    return "end marks must sit at the top and bottom"


def _a1_violation(d: Diagram) -> str | None:
    fam, k = d.family, d.k
    cup, cap = d.north_edges()[0], d.south_edges()[0]
    props = d.propagating()
    west, east = props[0][0], props[-1][0]
    hs = list(d.heights or ())
    allowed_loops = {(DOT,)} if fam is Family.AffineB else {(DOT,), (CIRC,)}
    if any(lp not in allowed_loops for lp in d.loops):
        return "forbidden loop"
    if any(e[2] for e in props[1:-1]):
        return "decorated middle propagating edge"
    for e, nodes in ((cup, (1, 2)), (cap, (-1, -2))):
        ends = {abs(e[0]), abs(e[1])}
        if ends == {1, 2}:
            if e[2] not in ((), (DOT,)):
                return "west cup/cap carries more than one dot"
        elif k in ends:
            want = ((CIRC,),) if fam is Family.AffineB else ((), (CIRC,))
            if e[2] not in want:
                return "east cup/cap has the wrong decoration"
        elif e[2]:
            return "inner cup/cap is decorated"
    left_up = cup[2] == (DOT,)
    left_down = cap[2] == (DOT,)
    right_up = CIRC in cup[2]
    right_down = CIRC in cap[2]
    single = len(hs) == 1

    def extremes(pred):
        idx = [p for p, t in enumerate(hs) if pred(t)]
        if any(0 < p < len(hs) - 1 for p in idx):
            return None
        return idx

    w_idx = extremes(lambda t: t[0] == west and t[1] == DOT)
    if w_idx is None:
        return "dot on the west edge is not an extreme mark"
    msg = _ends_rule(len(w_idx), 0 in w_idx, len(hs) - 1 in w_idx, single and bool(w_idx), left_up, left_down,
                    any(not is_left(x) for _, x in hs))
    if msg:
        return "west side: " + msg
    e_idx = extremes(lambda t: t[0] == east and t[1] == CIRC)
    if e_idx is None:
        return "circle on the east edge is not an extreme mark"
    msg = _ends_rule(len(e_idx), 0 in e_idx, len(hs) - 1 in e_idx, single and bool(e_idx), right_up, right_down,
                    any(is_left(x) for _, x in hs))
    if msg:
        return "east side: " + msg
    return None


def _loops_violation(d: Diagram) -> str | None:
    fam = d.family
    lc = {"dot": 0, "circ": 0, "mixed": 0}
    for lp in d.loops:
        if lp == (DOT,):
            lc["dot"] += 1
        elif fam is Family.AffineD and lp == (CIRC,):
            lc["circ"] += 1
        elif _mixed_loop(lp, fam) and len(lp) == 2:
            lc["mixed"] += 1
        else:
            return "forbidden loop"
    if lc["mixed"] and (lc["dot"] or lc["circ"]):
        return "mixed loops together with other loops"
    if lc["mixed"] and d.propagating():
        # only an undammed diagram has a face touching both walls
        return "mixed loop in a dammed diagram"
    if d.a > 1 and (lc["dot"] > 1 or lc["circ"] > 1):
        return "repeated single-mark loop"
    return None


def _many_cups_violation_B(d: Diagram) -> str | None:
    k = d.k
    dots = sum(e[2].count(DOT) for e in d.edges)
    circs = sum(e[2].count(CIRC) for e in d.edges)
    mixed = sum(1 for lp in d.loops if len(lp) > 1)
    if (mixed + dots) % 2:
        return "odd number of dots and mixed loops"
    if circs not in (0, 2):
        return "circle count is not 0 or 2"
    for e in d.edges:
        if CIRC in e[2] and k not in (abs(e[0]), abs(e[1])):
            return "circle away from the rightmost nodes"
    undammed = not d.propagating()
    for node in (k, -k):
        e = d.edge_at(node)
        if e[:2] == (k, -k):
            continue
        near = e[2][-1:] if e[1] == node else e[2][:1]
        if (undammed or e[2]) and near != (CIRC,):
            return "circle is not the mark nearest to the rightmost node"
    e = d.edge_at(1)
    if e[1] == -1:
        w = e[2]
        if w not in ((), (TRI,)):
            if CIRC in w or not _alternates(w) or d.loops:
                return "west vertical has a forbidden decoration"
    for node in (k, -k):
        e = d.edge_at(node)
        if e[:2] != (k, -k) and e[2].count(CIRC) != 1:
            return "edge at the rightmost node needs exactly one circle"
    e = d.edge_at(k)
    if e[1] == -k:
        w = e[2]
        if w not in ((), (TRI,)):
            if not (_alternates(w) and w[0] == CIRC and w[-1] == CIRC):
                return "east vertical has a forbidden decoration"
    return None


def _many_cups_violation_D(d: Diagram) -> str | None:
    k = d.k
    dots = sum(e[2].count(DOT) for e in d.edges)
    circs = sum(e[2].count(CIRC) for e in d.edges)
    lc = loop_counts(d)
    if (lc["mixed"] + dots) % 2 or (lc["mixed"] + circs) % 2:
        return "odd number of marks and mixed loops"
    for node, single, loop_kind in ((1, CIRC, "r"), (k, DOT, "dot")):
        e = d.edge_at(node)
        if e[1] != -node:
            continue
        w = e[2]
        if not w:
            continue
        if w == (single,):
            if lc[loop_kind]:
                return "vertical mark repeated by a loop"
            continue
        if not (_alternates(w) and not d.loops and len(w) > 1):
            return "end vertical has a forbidden decoration"
    return None


def admissibility_violation(d: Diagram) -> str | None:
    """``None`` for an admissible diagram, otherwise the first rule it breaks."""
    try:
        d.check()
    except DiagramError as exc:
        return str(exc)
    if not _is_irreducible(d):
        return "not irreducible"
    if d.a == 0:
        return None
    msg = _loops_violation(d)
    if msg:
        return msg
    props = d.propagating()
    if d.a > 1 and len(props) > 1:
        for e in d.edges:
            if DOT in e[2] and any(x != DOT for x in e[2]):
                return "dot and R-marks share an edge of a dammed diagram"
    if d.a == 1:
        return _a1_violation(d)
    if not props:
        # along each side of the strip joining the two walls, every dot lies
        # to the left of every R-mark
        for side in (d.north_edges(), d.south_edges()):
            marks = [x for e in sorted(side, key=lambda e: abs(e[0])) for x in e[2]]
            seen_r = False
            for x in marks:
                if not is_left(x):
                    seen_r = True
                elif seen_r:
                    return "undammed: an R-mark lies left of a dot"
    if d.family is Family.AffineB:
        return _many_cups_violation_B(d)
    return _many_cups_violation_D(d)


def is_admissible(d: Diagram) -> bool:
    return admissibility_violation(d) is None
