"""Wigner functions of a particle confined to an interval."""

from ._wigbound import *  # noqa: F401,F403
from ._wigbound import __version__  # noqa: F401
