"""Decorated pseudo diagrams: data model, concatenation and reduction.

Nodes of a k-box are encoded as integers: north node ``i`` is ``i`` and
south node ``i'`` is ``-i``.  An edge is a triple ``(u, v, decor)`` where
``u`` is the endpoint the decorations are read from (the left endpoint of a
non-propagating edge, the north endpoint of a propagating one) and
``decor`` is a tuple of decoration names.

When ``a(D) == 1`` the relative heights of decorations on propagating
edges and loops matter.  They are stored in ``heights``: a top-to-bottom
tuple of ``(owner, decoration)`` pairs, where ``owner`` is the north node
of the propagating edge carrying the decoration, or ``0`` for a loop.  In
that case every loop carries exactly one decoration and corresponds to one
``0`` entry.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .coxeter import Family

DOT = "dot"
CIRC = "circ"
TRI = "tri"

_SYMBOL = {DOT: "•", CIRC: "○", TRI: "△"}


class Decoration(str, enum.Enum):
    """The decoration alphabet.  ``RTri`` only exists in type B."""

    LDot = DOT
    RCirc = CIRC
    RTri = TRI


class NonTerminating(RuntimeError):
    """Raised when a reduction exceeds the configured step budget."""


class DiagramError(ValueError):
    """Raised for malformed diagrams or incompatible operands."""


def is_left(d: str) -> bool:
    return d == DOT


def alphabet(family: Family) -> tuple[str, ...]:
    return (DOT, CIRC, TRI) if family is Family.AffineB else (DOT, CIRC)


def _step_cap() -> int:
    return int(os.environ.get("TLDIAG_STEP_CAP", "100000"))


# ---------------------------------------------------------------------------
# decoration words


def combine(a: str, b: str, family: Family) -> tuple[str | None, int]:
    """Product of two adjacent decorations of the same side: (result, scalar)."""
    if a == DOT and b == DOT:
        return None, 1
    if family is Family.AffineD:
        if a == CIRC and b == CIRC:
            return None, 1
        raise DiagramError(f"decoration {a!r}/{b!r} not valid in type D")
    if a == CIRC and b == CIRC:
        return TRI, 1
    if a == TRI and b == TRI:
        return TRI, 2
    return CIRC, 2


def reduce_word(word: Iterable[str], family: Family) -> tuple[tuple[str, ...], int]:
    """Reduce a linear block: adjacent decorations of one side are multiplied out."""
    stack: list[str] = []
    scalar = 1
    for d in word:
        if stack and is_left(stack[-1]) == is_left(d):
            r, c = combine(stack.pop(), d, family)
            scalar *= c
            if r is not None:
                stack.append(r)
        else:
            stack.append(d)
    return tuple(stack), scalar


def reduce_cyclic(word: Iterable[str], family: Family) -> tuple[tuple[str, ...], int]:
    """Reduce a loop word, also combining across the seam."""
    w, scalar = reduce_word(word, family)
    w = list(w)
    while len(w) >= 2 and is_left(w[0]) == is_left(w[-1]):
        r, c = combine(w.pop(), w[0], family)
        scalar *= c
        if r is None:
            w.pop(0)
        else:
            w[0] = r
    return tuple(w), scalar


def cyclic_form(word: Sequence[str]) -> tuple[str, ...]:
    """Least rotation of the word or its reverse."""
    w = tuple(word)
    if not w:
        return w
    best = None
    for cand in (w, w[::-1]):
        for r in range(len(cand)):
            rot = cand[r:] + cand[:r]
            if best is None or rot < best:
                best = rot
    return best


# ---------------------------------------------------------------------------
# the diagram type


def node_str(x: int) -> str:
    return str(x) if x > 0 else f"{-x}'"


def parse_node(s: str | int) -> int:
    if isinstance(s, int):
        return s
    s = s.strip()
    if s.endswith("'"):
        return -int(s[:-1])
    return int(s)


def _orient(u: int, v: int) -> tuple[int, int]:
    """Reading orientation: north before south, then left before right."""
    if (u > 0) != (v > 0):
        return (u, v) if u > 0 else (v, u)
    return (u, v) if abs(u) < abs(v) else (v, u)


@dataclass(frozen=True)
class Diagram:
    family: Family
    k: int
    edges: tuple[tuple[int, int, tuple[str, ...]], ...]
    loops: tuple[tuple[str, ...], ...] = ()
    heights: tuple[tuple[int, str], ...] | None = None
    _partner: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        partner = {}
        for u, v, _ in self.edges:
            partner[u] = v
            partner[v] = u
        object.__setattr__(self, "_partner", partner)

    # -- structure ---------------------------------------------------------

    def partner(self, node: int) -> int:
        return self._partner[node]

    def edge_at(self, node: int) -> tuple[int, int, tuple[str, ...]]:
        for e in self.edges:
            if node in (e[0], e[1]):
                return e
        raise KeyError(node)

    @property
    def a(self) -> int:
        return sum(1 for u, v, _ in self.edges if u > 0 and v > 0)

    def propagating(self) -> list[tuple[int, int, tuple[str, ...]]]:
        return sorted((e for e in self.edges if e[0] > 0 > e[1]), key=lambda e: e[0])

    def north_edges(self) -> list[tuple[int, int, tuple[str, ...]]]:
        return [e for e in self.edges if e[0] > 0 and e[1] > 0]

    def south_edges(self) -> list[tuple[int, int, tuple[str, ...]]]:
        return [e for e in self.edges if e[0] < 0 and e[1] < 0]

    def is_identity(self) -> bool:
        return not self.loops and all(u == -v and not d for u, v, d in self.edges)

    def shape(self) -> frozenset:
        """The undecorated matching."""
        return frozenset((u, v) for u, v, _ in self.edges)

    def decorations(self) -> list[str]:
        out = [d for e in self.edges for d in e[2]]
        for lp in self.loops:
            out.extend(lp)
        return out

    # -- exposure ----------------------------------------------------------

    def _outermost(self, e) -> bool:
        u, v, _ = e
        same = [f for f in self.edges if (f[0] > 0) == (u > 0) and (f[1] > 0) == (v > 0)]
        lo, hi = sorted((abs(u), abs(v)))
        for f in same:
            a, b = sorted((abs(f[0]), abs(f[1])))
            if a < lo and hi < b:
                return False
        return True

    def left_exposed(self, e) -> bool:
        """True if the edge borders the face touching the west wall."""
        u, v, _ = e
        props = self.propagating()
        if u > 0 > v:
            return bool(props) and props[0][0] == u
        if not self._outermost(e):
            return False
        if not props:
            return True
        bound = props[0][0] if u > 0 else -props[0][1]
        return max(abs(u), abs(v)) < bound

    def right_exposed(self, e) -> bool:
        """True if the edge borders the face touching the east wall."""
        u, v, _ = e
        props = self.propagating()
        if u > 0 > v:
            return bool(props) and props[-1][0] == u
        if not self._outermost(e):
            return False
        if not props:
            return True
        bound = props[-1][0] if u > 0 else -props[-1][1]
        return min(abs(u), abs(v)) > bound

    def check(self) -> None:
        """Validate matching, planarity and the exposure rule."""
        nodes = sorted(x for u, v, _ in self.edges for x in (u, v))
        want = sorted(list(range(1, self.k + 1)) + [-i for i in range(1, self.k + 1)])
        if nodes != want:
            raise DiagramError("edges do not form a perfect matching of the box")
        # planarity: positions on the boundary circle 1..k, k'..1'
        def pos(x: int) -> int:
            return x if x > 0 else 2 * self.k + 1 + x
        chords = [tuple(sorted((pos(u), pos(v)))) for u, v, _ in self.edges]
        for a, b in chords:
            for c, d in chords:
                if a < c < b < d:
                    raise DiagramError("edges cross")
        allowed = alphabet(self.family)
        for e in self.edges:
            for d in e[2]:
                if d not in allowed:
                    raise DiagramError(f"decoration {d} not allowed in type {self.family.value}")
                if is_left(d) and not self.left_exposed(e):
                    raise DiagramError(f"edge {edge_name(e)} carries an L-decoration but is not left exposed")
                if not is_left(d) and not self.right_exposed(e):
                    raise DiagramError(f"edge {edge_name(e)} carries an R-decoration but is not right exposed")
        if self.a == 0 and (self.loops or any(e[2] for e in self.edges)):
            raise DiagramError("diagrams without cups carry no decorations")

    # -- keys and serialization -------------------------------------------

    def key(self) -> tuple:
        return (self.family.value, self.k, self.edges, self.loops, self.heights)

    def to_json(self) -> dict:
        out = {
            "family": self.family.value,
            "k": self.k,
            "edges": [{"from": node_str(u), "to": node_str(v), "decor": list(d)} for u, v, d in self.edges],
            "loops": [list(lp) for lp in self.loops],
        }
        if self.heights is not None:
            out["heights"] = [[node_str(o) if o else "loop", d] for o, d in self.heights]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Diagram":
        family = Family(data.get("family", "B"))
        edges = []
        for e in data["edges"]:
            u, v = parse_node(e["from"]), parse_node(e["to"])
            u2, v2 = _orient(u, v)
            decor = tuple(e.get("decor", ()))
            if (u2, v2) != (u, v):
                decor = decor[::-1]
            edges.append((u2, v2, decor))
        heights = None
        if data.get("heights") is not None:
            heights = tuple((0 if o == "loop" else parse_node(o), d) for o, d in data["heights"])
        return make_diagram(family, int(data["k"]), edges, data.get("loops", ()), heights)

    def __str__(self) -> str:
        return render_text(self)


def edge_name(e) -> str:
    u, v, d = e
    deco = "".join(_SYMBOL[x] for x in d)
    return "{" + node_str(u) + "," + node_str(v) + "}" + deco


def make_diagram(
    family: Family,
    k: int,
    edges: Iterable[tuple[int, int, Sequence[str]]],
    loops: Iterable[Sequence[str]] = (),
    heights: Iterable[tuple[int, str]] | None = None,
) -> Diagram:
    """Build a diagram in canonical storage order (no reduction is applied)."""
    family = Family(family)
    es = []
    for u, v, d in edges:
        u2, v2 = _orient(u, v)
        d = tuple(d)
        if (u2, v2) != (u, v):
            d = d[::-1]
        es.append((u2, v2, d))
    es.sort(key=lambda e: (0 if e[0] > 0 else 1, abs(e[0])))
    lps = tuple(sorted(cyclic_form(lp) for lp in loops))
    a = sum(1 for u, v, _ in es if u > 0 and v > 0)
    hs = tuple((int(o), d) for o, d in heights) if heights is not None else None
    if a != 1:
        hs = None
    elif hs is None:
        hs = _default_heights(es, lps)
    return Diagram(family, k, tuple(es), lps, hs)


def _default_heights(edges, loops) -> tuple[tuple[int, str], ...]:
    # Used for hand-built a=1 diagrams without explicit heights: propagating
    # decorations left to right, then loops.
    out = []
    for u, v, d in edges:
        if u > 0 > v:
            out.extend((u, x) for x in d)
    for lp in loops:
        out.extend((0, x) for x in lp)
    return tuple(out)


def identity_diagram(k: int, family: Family = Family.AffineB) -> Diagram:
    return make_diagram(family, k, [(i, -i, ()) for i in range(1, k + 1)])


def a_count(d: Diagram) -> int:
    return d.a


def left_exposed(d: Diagram, e) -> bool:
    return d.left_exposed(e)


def right_exposed(d: Diagram, e) -> bool:
    return d.right_exposed(e)


# ---------------------------------------------------------------------------
# concatenation


@dataclass
class RawProduct:
    """Result of stacking two diagrams before any relation is applied.

    ``paths`` holds ``(u, v, items)`` with ``items`` a list of
    ``(height_key, decoration)`` read from ``u`` to ``v``; ``cycles`` holds
    the item lists of closed components.  ``tracked`` says whether height
    keys are meaningful (both factors have a single cup).
    """

    family: Family
    k: int
    paths: list
    cycles: list
    tracked: bool


def _segments(d: Diagram, factor: int, top: bool):
    """Edges of ``d`` as segments between combined-graph nodes, with height keys."""
    body_pos: dict[int, list[int]] = {}
    loop_pos: list[int] = []
    if d.heights is not None:
        for p, (owner, _) in enumerate(d.heights):
            if owner:
                body_pos.setdefault(owner, []).append(p)
            else:
                loop_pos.append(p)

    def name(x: int):
        if top:
            return ("t", x) if x > 0 else ("m", -x)
        return ("m", x) if x > 0 else ("b", -x)

    segs = []
    for u, v, dec in d.edges:
        if u > 0 and v > 0:
            keys = [(factor, 0, q) for q in range(len(dec))]
        elif u < 0 and v < 0:
            keys = [(factor, 2, q) for q in range(len(dec))]
        else:
            pos = body_pos.get(u, [])
            keys = [(factor, 1, pos[q] if q < len(pos) else q) for q in range(len(dec))]
        segs.append((name(u), name(v), list(zip(keys, dec))))
    cycles = []
    if d.heights is not None:
        for p in loop_pos:
            cycles.append([((factor, 1, p), d.heights[p][1])])
    else:
        for lp in d.loops:
            cycles.append([((factor, 1, 0), x) for x in lp])
    return segs, cycles


def concat_raw(x: Diagram, y: Diagram) -> RawProduct:
    """Stack ``x`` on top of ``y`` and trace the resulting curves."""
    if x.k != y.k:
        raise DiagramError(f"width mismatch: {x.k} vs {y.k}")
    if x.family is not y.family:
        raise DiagramError("family mismatch")
    sx, cx = _segments(x, 0, True)
    sy, cy = _segments(y, 1, False)
    adj: dict = {}
    segs = sx + sy
    for idx, (p, q, _) in enumerate(segs):
        adj.setdefault(p, []).append(idx)
        adj.setdefault(q, []).append(idx)
    used = [False] * len(segs)

    def walk(start):
        items = []
        node = start
        while True:
            nxt = [i for i in adj[node] if not used[i]]
            if not nxt:
                return node, items
            i = nxt[0]
            used[i] = True
            p, q, its = segs[i]
            if p == node:
                items.extend(its)
                node = q
            else:
                items.extend(reversed(its))
                node = p
            if node[0] != "m":
                return node, items

    def outer(nd) -> int:
        return nd[1] if nd[0] == "t" else -nd[1]

    paths = []
    starts = [("t", i) for i in range(1, x.k + 1)] + [("b", i) for i in range(1, x.k + 1)]
    for s in starts:
        if all(used[i] for i in adj[s]):
            continue
        end, items = walk(s)
        u, v = outer(s), outer(end)
        if _orient(u, v) != (u, v):
            u, v = v, u
            items = items[::-1]
        paths.append((u, v, items))
    cycles = cx + cy
    for i in range(len(segs)):
        if not used[i]:
            p = segs[i][0]
            _, items = walk(p)
            cycles.append(items)
    tracked = x.a == 1 and y.a == 1
    return RawProduct(x.family, x.k, paths, cycles, tracked)


# ---------------------------------------------------------------------------
# reduction


@dataclass(frozen=True)
class ReductionResult:
    diagram: Diagram
    scalar: int
    delta: int


# Switches for the loop rules; see the decisions ledger.  They are module
# level so that the test-suite can run negative controls.
ABSORB_MIXED_LOOPS = True


def reduce(raw: RawProduct | Diagram) -> ReductionResult:
    """Apply the relations until the diagram is irreducible."""
    if isinstance(raw, Diagram):
        raw = _as_raw(raw)
    north_caps = sum(1 for u, v, _ in raw.paths if u > 0 and v > 0)
    if north_caps == 0:
        scalar, delta = 1, 0
        for c in raw.cycles:
            w, s = reduce_cyclic([d for _, d in c], raw.family)
            if w:
                raise DiagramError("decorated loop in a diagram without cups")
            delta += 1
        edges = [(u, v, ()) for u, v, _ in raw.paths]
        return ReductionResult(make_diagram(raw.family, raw.k, edges), scalar, delta)
    if north_caps == 1 and raw.tracked:
        return _reduce_tracked(raw)
    return _reduce_free(raw)


def _as_raw(d: Diagram) -> RawProduct:
    segs, cycles = _segments(d, 0, True)
    paths = []
    for (p, q, items), (u, v, _) in zip(segs, d.edges):
        paths.append((u, v, items))
    return RawProduct(d.family, d.k, paths, cycles, d.a == 1)


def _loop_value(word: tuple[str, ...], family: Family) -> tuple[bool, int, int]:
    """Evaluate closed loops that reduce to scalars: (is_scalar, scalar, delta)."""
    if not word:
        return True, 1, 1
    if family is Family.AffineB and all(not is_left(d) for d in word):
        # only a lone triangle survives cyclic reduction of an R-loop
        if word == (TRI,):
            return True, 1, 1
    return False, 1, 0


def _reduce_free(raw: RawProduct) -> ReductionResult:
    """Reduction when heights are immaterial (more than one cup)."""
    fam = raw.family
    scalar, delta = 1, 0
    edges = []
    for u, v, items in raw.paths:
        w, s = reduce_word([d for _, d in items], fam)
        scalar *= s
        edges.append([u, v, list(w)])
    loops = []
    for c in raw.cycles:
        loops.append(list(c and [d for _, d in c]))
    steps = 0
    cap = _step_cap()
    changed = True
    while changed:
        steps += 1
        if steps > cap:
            raise NonTerminating("reduction did not terminate")
        changed = False
        new_loops = []
        for lp in loops:
            w, s = reduce_cyclic(lp, fam)
            scalar *= s
            ok, s2, dl = _loop_value(w, fam)
            if ok:
                scalar *= s2
                delta += dl
                changed = True
            else:
                new_loops.append(list(w))
        loops = new_loops
        for side, mark in ((True, DOT), (False, CIRC)):
            if fam is Family.AffineB and not side:
                continue
            solo = [lp for lp in loops if lp == [mark]]
            if not solo:
                continue
            for e in edges:
                if mark in e[2]:
                    w, s = reduce_word([d for d in e[2] if d != mark], fam)
                    scalar *= s
                    e[2] = list(w)
                    changed = True
            if ABSORB_MIXED_LOOPS:
                for lp in loops:
                    if lp != [mark] and mark in lp:
                        lp[:] = [d for d in lp if d != mark]
                        changed = True
            if len(solo) > 1:
                delta += len(solo) - 1
                rest = [lp for lp in loops if lp != [mark]]
                loops = rest + [[mark]]
                changed = True
    d = make_diagram(fam, raw.k, [(u, v, tuple(w)) for u, v, w in edges], [tuple(lp) for lp in loops])
    return ReductionResult(d, scalar, delta)


def _reduce_tracked(raw: RawProduct) -> ReductionResult:
    """Reduction for a single cup: decorations live in one global height order."""
    fam = raw.family
    scalar, delta = 1, 0
    cup = next(p for p in raw.paths if p[0] > 0 and p[1] > 0)
    cap = next(p for p in raw.paths if p[0] < 0 and p[1] < 0)
    props = [p for p in raw.paths if p[0] > 0 > p[1]]
    body = []
    for u, v, items in props:
        for key, d in items:
            body.append((key, ("e", u), d))
    for idx, c in enumerate(raw.cycles):
        for key, d in c:
            body.append((key, ("l", idx), d))
        if not c:
            body.append(((9, 9, idx), ("l", idx), None))
    body.sort(key=lambda t: t[0])
    seq = [["cup", d] for _, d in cup[2]]
    empty_loops = 0
    for _, owner, d in body:
        if d is None:
            empty_loops += 1
        else:
            seq.append([owner, d])
    delta += empty_loops
    seq += [["cap", d] for _, d in cap[2]]
    live_loops = {o for o, _ in seq if o[0] == "l"} if seq else set()
    steps = 0
    cap_steps = _step_cap()
    while True:
        steps += 1
        if steps > cap_steps:
            raise NonTerminating("reduction did not terminate")
        before = [tuple(x) for x in seq]
        # 1. multiply out adjacent decorations of one owner
        stack: list[list] = []
        for owner, d in seq:
            if stack and stack[-1][0] == owner and is_left(stack[-1][1]) == is_left(d):
                r, c = combine(stack.pop()[1], d, fam)
                scalar *= c
                if r is not None:
                    stack.append([owner, r])
            else:
                stack.append([owner, d])
        seq = stack
        # 2. loops that became scalars
        present = {}
        for owner, d in seq:
            if owner[0] == "l":
                present.setdefault(owner, []).append(d)
        for owner in list(live_loops):
            word = tuple(present.get(owner, ()))
            word, s = reduce_cyclic(word, fam)
            scalar *= s
            ok, s2, dl = _loop_value(word, fam)
            if ok:
                scalar *= s2
                delta += dl
                live_loops.discard(owner)
                seq = [x for x in seq if x[0] != owner]
        # 3. a lone loop decoration absorbs the same decoration nearby
        for mark in (DOT, CIRC):
            if mark == CIRC and fam is Family.AffineB:
                continue
            side = is_left(mark)
            out = []
            i = 0
            while i < len(seq):
                if is_left(seq[i][1]) != side:
                    out.append(seq[i])
                    i += 1
                    continue
                j = i
                while j < len(seq) and is_left(seq[j][1]) == side:
                    j += 1
                group = seq[i:j]
                loop_items = [x for x in group if x[0][0] == "l" and x[1] == mark]
                if loop_items:
                    keep = loop_items[0]
                    for x in loop_items[1:]:
                        delta += 1
                        live_loops.discard(x[0])
                    group = [x for x in group if x is keep or (x[0][0] != "l" and x[1] != mark) or (x[0][0] == "l" and x[1] != mark)]
                out.extend(group)
                i = j
            seq = out
        if [tuple(x) for x in seq] == before:
            break
    cup_word = tuple(d for o, d in seq if o == "cup")
    cap_word = tuple(d for o, d in seq if o == "cap")
    edges = [(cup[0], cup[1], cup_word), (cap[0], cap[1], cap_word)]
    heights = []
    for owner, d in seq:
        if owner[0] == "e":
            heights.append((owner[1], d))
        elif owner[0] == "l":
            heights.append((0, d))
    for u, v, _ in props:
        edges.append((u, v, tuple(d for o, d in heights if o == u)))
    loops = [(d,) for o, d in heights if o == 0]
    dg = make_diagram(fam, raw.k, edges, loops, heights)
    return ReductionResult(dg, scalar, delta)


def multiply_diagrams(x: Diagram, y: Diagram) -> ReductionResult:
    """Concatenate and reduce: x is placed on top of y."""
    if x.is_identity() and x.k == y.k:
        return ReductionResult(y, 1, 0)
    if y.is_identity() and x.k == y.k:
        return ReductionResult(x, 1, 0)
    return reduce(concat_raw(x, y))


def canonical_key(d: Diagram) -> bytes:
    return json.dumps(d.to_json(), sort_keys=True, separators=(",", ":")).encode()


# ---------------------------------------------------------------------------
# text rendering


def render_text(d: Diagram) -> str:
    def dec(w):
        return "".join(_SYMBOL[x] for x in w)
    parts = [f"{d.family.value}~ k={d.k}"]
    for e in d.edges:
        parts.append("  " + edge_name(e))
    for lp in d.loops:
        parts.append("  loop(" + dec(lp) + ")")
    if d.heights:
        parts.append("  heights: " + " ".join((node_str(o) if o else "L") + ":" + _SYMBOL[x] for o, x in d.heights))
    return "\n".join(parts)
