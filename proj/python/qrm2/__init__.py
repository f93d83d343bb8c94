"""Two-qubit quantum Rabi model toolkit.

Sector Hamiltonians, dense and iterative eigensolvers, closed-form
low-frequency limits, entanglement observables, and parameter sweeps.
All heavy lifting happens in the compiled extension; this package just
re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
