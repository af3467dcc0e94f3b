"""Kernel backend selection.

The compiled extension is used when it imports; ``PATHCLASS_PURE=1`` forces
the pure-Python kernels. Both expose the same functions and constants.
"""

import os

if os.environ.get("PATHCLASS_PURE") == "1":
    from ._pykernels import *  # noqa: F401,F403
    from . import _pykernels as backend
else:
    try:
        from ._ckernels import *  # noqa: F401,F403
        from . import _ckernels as backend
    except ImportError:
        from ._pykernels import *  # noqa: F401,F403
        from . import _pykernels as backend

BACKEND = backend.BACKEND
UNCERTAIN = backend.UNCERTAIN
WALK_OUTSIDE = backend.WALK_OUTSIDE
WALK_UNCERTAIN = backend.WALK_UNCERTAIN
WALK_FAILED = backend.WALK_FAILED
