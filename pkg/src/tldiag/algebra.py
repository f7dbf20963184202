"""Linear combinations of diagrams over Z[delta], simple diagrams and theta."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .coxeter import CoxeterSpec, Family, NotFC, check_word, is_fully_commutative
from .diagrams import (
    CIRC,
    DOT,
    Diagram,
    canonical_key,
    identity_diagram,
    make_diagram,
    multiply_diagrams,
)


class InternalAssertion(AssertionError):
    """A result contradicts a guarantee of the construction."""


# ---------------------------------------------------------------------------
# integer polynomials in delta


@dataclass(frozen=True)
class DeltaPoly:
    """Integer polynomial in delta; ``coeffs[i]`` multiplies delta**i."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def monomial(cls, scalar: int = 1, degree: int = 0) -> "DeltaPoly":
        return cls((0,) * degree + (scalar,))

    @classmethod
    def const(cls, c: int) -> "DeltaPoly":
        return cls((c,))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "DeltaPoly") -> "DeltaPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return DeltaPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "DeltaPoly":
        return DeltaPoly(tuple(-x for x in self.coeffs))

    def __sub__(self, other: "DeltaPoly") -> "DeltaPoly":
        return self + (-other)

    def __mul__(self, other) -> "DeltaPoly":
        if isinstance(other, int):
            return DeltaPoly(tuple(x * other for x in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return DeltaPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return DeltaPoly(tuple(out))

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("δ" if i == 1 else f"δ^{i}")
            if mono and c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}{mono}")
        return " + ".join(parts)

    def to_json(self) -> list[int]:
        return list(self.coeffs)


# ---------------------------------------------------------------------------
# algebra elements


class AlgebraElement:
    """Finite Z[delta]-combination of irreducible diagrams of one width."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[bytes, tuple[Diagram, DeltaPoly]] | None = None):
        clean = {}
        for key, (d, c) in (terms or {}).items():
            if not c.is_zero():
                clean[key] = (d, c)
        self.terms = clean

    @classmethod
    def from_diagram(cls, d: Diagram, coeff: DeltaPoly | int = 1) -> "AlgebraElement":
        if isinstance(coeff, int):
            coeff = DeltaPoly.const(coeff)
        return cls({canonical_key(d): (d, coeff)})

    @classmethod
    def zero(cls) -> "AlgebraElement":
        return cls()

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.terms)
        for key, (d, c) in other.terms.items():
            if key in out:
                out[key] = (d, out[key][1] + c)
            else:
                out[key] = (d, c)
        return AlgebraElement(out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(DeltaPoly.const(-1))

    def scale(self, c: DeltaPoly | int) -> "AlgebraElement":
        if isinstance(c, int):
            c = DeltaPoly.const(c)
        return AlgebraElement({k: (d, x * c) for k, (d, x) in self.terms.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return {k: c for k, (_, c) in self.terms.items()} == {k: c for k, (_, c) in other.terms.items()}

    def __hash__(self) -> int:
        return hash(frozenset((k, c) for k, (_, c) in self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def single(self) -> tuple[Diagram, DeltaPoly]:
        """The unique term of a one-term element."""
        if len(self.terms) != 1:
            raise ValueError(f"element has {len(self.terms)} terms")
        return next(iter(self.terms.values()))

    def items(self) -> list[tuple[Diagram, DeltaPoly]]:
        return [self.terms[k] for k in sorted(self.terms)]

    def to_json(self) -> list[dict]:
        return [{"diagram": d.to_json(), "coeff": c.to_json()} for d, c in self.items()]

    @classmethod
    def from_json(cls, data: Iterable[dict]) -> "AlgebraElement":
        out = cls()
        for t in data:
            out = out + cls.from_diagram(Diagram.from_json(t["diagram"]), DeltaPoly(tuple(t["coeff"])))
        return out

    def __repr__(self) -> str:
        return " + ".join(f"({c})·[{canonical_key(d).decode()}]" for d, c in self.items()) or "0"


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of concatenation followed by reduction."""
    out: dict[bytes, tuple[Diagram, DeltaPoly]] = {}
    for dx, cx in x.terms.values():
        for dy, cy in y.terms.values():
            r = multiply_diagrams(dx, dy)
            c = cx * cy * DeltaPoly.monomial(r.scalar, r.delta)
            key = canonical_key(r.diagram)
            if key in out:
                out[key] = (r.diagram, out[key][1] + c)
            else:
                out[key] = (r.diagram, c)
    return AlgebraElement(out)


# ---------------------------------------------------------------------------
# simple diagrams and theta


def _top_generator(spec: CoxeterSpec) -> int:
    return spec.n + 1 if spec.family is Family.AffineB else spec.n + 2


@lru_cache(maxsize=None)
def simple_diagram(spec: CoxeterSpec, i: int) -> Diagram:
    """The diagram of the generator ``i``.

    Generator ``0`` is the cup and cap at nodes 1, 2 decorated by a dot.  The
    last generator is the cup and cap at the two rightmost nodes decorated by
    a circle.  Every other generator ``i`` is the undecorated cup and cap at
    nodes ``i, i+1``.
    """
    if not 0 <= i < spec.rank:
        raise IndexError(f"generator {i} out of range for {spec}")
    k = spec.k
    if i == 0:
        left, decor = 1, (DOT,)
    elif i == _top_generator(spec):
        left, decor = spec.n + 1, (CIRC,)
    else:
        left, decor = i, ()
    edges = [(left, left + 1, decor), (-left, -(left + 1), decor)]
    edges += [(j, -j, ()) for j in range(1, k + 1) if j not in (left, left + 1)]
    return make_diagram(spec.family, k, edges)


def generator_of_edge(spec: CoxeterSpec, left: int, decor: Sequence[str]) -> int:
    """Generator whose simple diagram has the cup ``{left, left+1}`` decorated by ``decor``."""
    decor = tuple(decor)
    if decor == (DOT,) and left == 1:
        return 0
    if decor == (CIRC,) and left == spec.n + 1:
        return _top_generator(spec)
    if decor:
        raise ValueError("not a simple edge")
    if spec.family is Family.AffineB and left == spec.n + 1:
        raise ValueError("the rightmost cup of type B is always circled")
    return left


def identity(spec: CoxeterSpec) -> Diagram:
    return identity_diagram(spec.k, spec.family)


def word_product(w: Sequence[int], spec: CoxeterSpec) -> tuple[Diagram, int, int]:
    """Multiply simple diagrams left to right: (diagram, scalar, delta exponent)."""
    d = identity(spec)
    scalar, delta = 1, 0
    for i in w:
        r = multiply_diagrams(d, simple_diagram(spec, i))
        d = r.diagram
        scalar *= r.scalar
        delta += r.delta
    return d, scalar, delta


def theta_diagram(w: Sequence[int], spec: CoxeterSpec, check: bool = True) -> Diagram:
    """D_w for an FC word ``w``."""
    word = check_word(w, spec)
    if check and not is_fully_commutative(word, spec):
        raise NotFC(f"{list(word)} is not fully commutative in {spec}")
    d, scalar, delta = word_product(word, spec)
    if (scalar, delta) != (1, 0):
        raise InternalAssertion(f"scalar {scalar}·δ^{delta} appeared for FC word {list(word)}")
    return d


def theta(w: Sequence[int], spec: CoxeterSpec) -> AlgebraElement:
    """Image of the monomial basis element b_w."""
    return AlgebraElement.from_diagram(theta_diagram(w, spec))


def generator_element(spec: CoxeterSpec, i: int) -> AlgebraElement:
    return AlgebraElement.from_diagram(simple_diagram(spec, i))


# ---------------------------------------------------------------------------
# presentation


@dataclass
class RelationCheck:
    name: str
    lhs: str
    rhs: str
    passed: bool


def _relations(spec: CoxeterSpec):
    """Yield (label, lhs word, rhs scalar poly, rhs word) for every defining relation."""
    from .coxeter import coxeter_matrix

    m = coxeter_matrix(spec)
    tag = "b" if spec.family is Family.AffineB else "d"
    gens = list(spec.generators)
    for i in gens:
        yield f"({tag}1) {i}^2", (i, i), DeltaPoly.monomial(1, 1), (i,)
    for i in gens:
        for j in gens:
            if i < j and m[i][j] == 2:
                yield f"({tag}2) {i}{j}={j}{i}", (i, j), DeltaPoly.const(1), (j, i)
    for i in gens:
        for j in gens:
            if i != j and m[i][j] == 3:
                yield f"({tag}3) {i}{j}{i}={i}", (i, j, i), DeltaPoly.const(1), (i,)
    if spec.family is Family.AffineB:
        a, b = spec.n, spec.n + 1
        for i, j in ((a, b), (b, a)):
            yield f"(b4) {i}{j}{i}{j}=2·{i}{j}", (i, j, i, j), DeltaPoly.const(2), (i, j)


def check_presentation(spec: CoxeterSpec, generators: Mapping[int, Diagram] | None = None) -> list[RelationCheck]:
    """Evaluate every defining relation on the simple diagrams (or on a supplied set)."""
    gens = {i: simple_diagram(spec, i) for i in spec.generators}
    if generators:
        gens.update(generators)

    def prod(word):
        out = AlgebraElement.from_diagram(identity(spec))
        for i in word:
            out = out * AlgebraElement.from_diagram(gens[i])
        return out

    report = []
    for name, lhs, coeff, rhs in _relations(spec):
        left = prod(lhs)
        right = prod(rhs).scale(coeff)
        report.append(RelationCheck(name, " ".join(map(str, lhs)), f"{coeff}·" + " ".join(map(str, rhs)), left == right))
    return report


def structure_constants(u: Sequence[int], v: Sequence[int], spec: CoxeterSpec) -> dict[tuple[int, ...], DeltaPoly]:
    """Coefficients c_w in b_u b_v = sum c_w b_w, read off by factorizing each diagram term.

    Keys are canonical (lexicographically least) words.
    """
    from .coxeter import canonical_word
    from .factor import factorize

    prod = theta(u, spec) * theta(v, spec)
    out: dict[tuple[int, ...], DeltaPoly] = {}
    for d, c in prod.items():
        w = canonical_word(factorize(d, spec), spec)
        out[w] = out.get(w, DeltaPoly()) + c
    return out
