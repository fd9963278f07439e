"""Select the Mathieu kernel at import time.

The compiled extension is used when it was built; setting the environment
variable ``PHOTOABSORB_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

from . import _mathieu_py

if os.environ.get("PHOTOABSORB_PURE_PYTHON", "") == "1":
    propagate = _mathieu_py.propagate
    BACKEND = "python"
else:
    try:
        from ._mathieu import propagate
        BACKEND = "cython"
    except ImportError:
        propagate = _mathieu_py.propagate
        BACKEND = "python"

__all__ = ["propagate", "BACKEND"]
