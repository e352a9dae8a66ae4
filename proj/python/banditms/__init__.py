"""Model-selection algorithms for stochastic linear bandits.

Thin wrapper around the compiled extension; see the project README for the
CLI and experiment presets.
"""

from ._banditms import *  # noqa: F401,F403
from ._banditms import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
