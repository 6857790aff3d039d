"""Variable-mass Klein-Gordon toolkit.

Thin wrapper over the compiled extension: four-vector kinematics, the
xi <-> tau Laplace machinery, propagator kernels, kernel-positivity
functionals and the tau-semigroup maps.
"""

from kgtau._core import *  # noqa: F401,F403
from kgtau._core import __version__  # noqa: F401
