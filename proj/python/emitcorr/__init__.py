"""Correlation dynamics of two dipole-coupled quantum emitters."""

from ._emitcorr import *  # noqa: F401,F403
from ._emitcorr import Error, __doc__  # noqa: F401
