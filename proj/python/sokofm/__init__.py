"""Local forward-model learning and simulation-based planning on Sokoban."""

from ._core import *  # noqa: F401,F403
