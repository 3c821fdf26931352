"""Exact non-Archimedean integration over A = F_q[T].

Submodules: algebra, series, padic, bases, measures, lseries, vadic, cli.
"""

from .algebra import GF, FqPoly, AdditiveSubgroup, monic_polys, irreducible_monics

__version__ = "0.1.0"

__all__ = ["GF", "FqPoly", "AdditiveSubgroup", "monic_polys", "irreducible_monics", "__version__"]
