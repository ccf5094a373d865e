"""Finite-time blowup crossing: ODE/PDE engines and scenario runner."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
