"""Select the numerical core at import time.

The compiled extension is preferred; setting ``CYCLET_PURE_PYTHON=1`` forces
the pure-Python fallback.
"""

import os

from . import _pycore

if os.environ.get("CYCLET_PURE_PYTHON", "") not in ("", "0"):
    core = _pycore
    NAME = "python"
else:
    try:
        from . import _core as core
        NAME = "compiled"
    except ImportError:
        core = _pycore
        NAME = "python"

BACKENDS = {"python": _pycore}
if NAME == "compiled":
    BACKENDS["compiled"] = core
else:
    try:
        from . import _core as _compiled

        BACKENDS["compiled"] = _compiled
    except ImportError:
        pass
