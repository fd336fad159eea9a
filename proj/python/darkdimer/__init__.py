"""Dark dimer steady states of emitter arrays in a squeezed vacuum."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
