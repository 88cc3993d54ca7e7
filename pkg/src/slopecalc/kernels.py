"""Kernel selection.

The compiled extension is used when it imports; setting
``SLOPECALC_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

from ._ext import _core_py

BACKEND = "python"
_impl = _core_py

if os.environ.get("SLOPECALC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._ext import _core as _compiled
    except ImportError:  # extension not built
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

mul_terms = _impl.mul_terms
aut_search = _impl.aut_search
