"""Finite rings, matrix subordination and the ordered monoids built from them."""
from .errors import WorkbenchError
from .ringspec import build_ring
from .rings import FiniteRing, verify_ring_axioms
from .matrices import RingMatrix, subordinate
from .ideals import Ideal, enumerate_ideals, make_ideal

__all__ = ["WorkbenchError", "build_ring", "FiniteRing", "verify_ring_axioms", "RingMatrix",
           "subordinate", "Ideal", "enumerate_ideals", "make_ideal"]
