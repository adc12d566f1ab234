"""Piecewise-deterministic detector-click simulation engines.

Thin python surface over the C++ core: grids, wave functions and spinor
fields, the damped/jump trajectory engines, the dual master equation, and
the experiment harness.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
