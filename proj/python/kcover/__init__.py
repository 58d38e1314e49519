"""Two-sample k-coverage thresholds: simulation and limit-law analytics."""

from ._kcover import *  # noqa: F401,F403
from ._kcover import __doc__  # noqa: F401
