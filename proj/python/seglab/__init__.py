"""Finite-difference laboratory for partially segregated harmonic triples."""

try:
    # installed layout: the extension lives inside the package
    from ._seglab import *  # noqa: F401,F403
except ImportError:
    # build-tree layout: the extension sits on PYTHONPATH
    from _seglab import *  # noqa: F401,F403

__version__ = "0.1.0"
