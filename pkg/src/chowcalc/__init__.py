"""chowcalc: exact intersection theory on Grassmannian bundle towers.

Everything is integer-exact: sparse Z-polynomials with a global degree
truncation, Chern-class calculus, Gysin pushforwards pinned by classical
normalizations, and integer-lattice ideal arithmetic via Hermite/Smith
normal forms.  The headline application is the verification pipeline for
the equivariant Chow ring of SO(4), exposed both as a library
(`so4pipeline.run`) and through the `chowcalc` command line tool.
"""

__version__ = "0.1.0"

from .polyring import Poly, PolyError, VarTable
from .chern import Bundle, BundleError
from .zgraded import GradedIdeal, GradedError
from .grasstower import GradedRing, TowerError, extend, fiber_product, free_ring
from .so4pipeline import Report, So4Pipeline, run

__all__ = [
    "__version__",
    "Poly",
    "PolyError",
    "VarTable",
    "Bundle",
    "BundleError",
    "GradedIdeal",
    "GradedError",
    "GradedRing",
    "TowerError",
    "extend",
    "fiber_product",
    "free_ring",
    "Report",
    "So4Pipeline",
    "run",
]
