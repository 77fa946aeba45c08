"""Effective tensors and relative limits for two-phase composites.

Computes the effective conductivity A* and the relative energy limit B# of
two interacting two-phase microstructures, evaluates the four optimal trace
bounds on the pair, constructs the saturating laminates and coated spheres,
and solves small relaxed design problems in one dimension with exhaustive
classical oracles.
"""

from .gclosure import PhaseA
from .homog1d import Profile1D, Source1D
from .laminates import LaminateSpec
from .pairbounds import PhaseB
from .symtensor import SymTensor

__all__ = ["PhaseA", "PhaseB", "SymTensor", "LaminateSpec", "Profile1D", "Source1D"]
__version__ = "0.1.0"
