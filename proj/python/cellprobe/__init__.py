"""Non-adaptive cell-probe schemes and their restriction analysis."""

from ._cellprobe import *  # noqa: F401,F403
from ._cellprobe import __doc__  # noqa: F401
