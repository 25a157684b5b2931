"""Fisher-information bounds for pulsed quantum light spectroscopy.

Thin python layer over the C++ core; everything lives in the compiled
extension module.
"""

from _pulseqfi import *  # noqa: F401,F403
from _pulseqfi import __version__  # noqa: F401
