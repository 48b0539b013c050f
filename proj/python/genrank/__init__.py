"""Generalizability analysis for experimental studies.

Models study results as samples from a distribution over rankings (or raw
score vectors), measures how close two study realizations are with a
kernel MMD, and estimates how many experiments are needed for
(alpha*, delta*)-generalizable results.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__doc__ = _core_doc if _core_doc else __doc__
