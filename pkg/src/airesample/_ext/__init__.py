"""Hot kernels with a compiled backend and a numpy fallback.

The compiled module is used when it was built at install time. Setting
``AIRESAMPLE_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import fallback

BACKEND = "python"

if os.environ.get("AIRESAMPLE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None
else:
    _compiled = None

if _compiled is not None:
    knn_indices = _compiled.knn_indices
    best_split = _compiled.best_split
    BACKEND = "cython"
else:
    knn_indices = fallback.knn_indices
    best_split = fallback.best_split

__all__ = ["BACKEND", "best_split", "knn_indices", "fallback"]
