"""Design and simulation toolkit for folded-sandwich down-conversion sources."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
