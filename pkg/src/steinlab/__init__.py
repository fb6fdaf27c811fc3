"""steinlab: exact desk-scale verification of flag-complex homology,
spanning-tuple resolutions, stabilization maps, Manin symbol presentations,
nilpotent Lie algebra cohomology, and a quartic-integer unitary lattice."""

__version__ = "0.1.0"

from .fields import GF, QQ
from .matrix import ExactMatrix

__all__ = ["GF", "QQ", "ExactMatrix", "__version__"]
