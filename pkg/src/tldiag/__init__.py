"""Decorated diagram algebras of affine types B and D and their FC bases."""

from .admissible import NotAdmissible, classify_diagram, is_admissible, length
from .algebra import AlgebraElement, DeltaPoly, check_presentation, simple_diagram, theta, theta_diagram
from .coxeter import CoxeterSpec, Family, NotFC, NotReduced, enumerate_fc, is_fully_commutative
from .diagrams import CIRC, DOT, TRI, Diagram, canonical_key, make_diagram, multiply_diagrams, reduce
from .factor import cut_and_paste, factorize, factorize_trace, suitable_edge
from .heaps import Heap, classify_family_B, classify_family_D, delta_D, heap_from_word

__all__ = [
    "AlgebraElement", "CIRC", "CoxeterSpec", "DOT", "DeltaPoly", "Diagram", "Family", "Heap",
    "NotAdmissible", "NotFC", "NotReduced", "TRI", "canonical_key", "check_presentation",
    "classify_diagram", "classify_family_B", "classify_family_D", "cut_and_paste", "delta_D",
    "enumerate_fc", "factorize", "factorize_trace", "heap_from_word", "is_admissible",
    "is_fully_commutative", "length", "make_diagram", "multiply_diagrams", "reduce",
    "simple_diagram", "suitable_edge", "theta", "theta_diagram",
]
