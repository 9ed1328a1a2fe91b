"""Monte Carlo BER simulation for network-coded relaying."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
