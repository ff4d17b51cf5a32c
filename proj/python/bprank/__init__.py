"""Bipartite ranking with the pairwise squared loss (BBR and LCBR)."""

from ._bprank import *  # noqa: F401,F403
from ._bprank import __doc__  # noqa: F401

__version__ = "0.1.0"
