"""Exact Chevalley-Eilenberg cohomology of osp(1|2) weight modules.

The package computes, in exact rational arithmetic, the cohomology of
the Lie superalgebra osp(1|2) with coefficients in truncated modules of
differential operators acting between weighted-density spaces on the
superline, and cross-validates the brute-force dimensions against
closed-form kernel descriptions and explicit cocycles.
"""

from .linalg import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
