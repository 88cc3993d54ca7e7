"""Hot kernels.

``_core`` is the compiled Cython build of ``_core.pyx``; ``_core_py`` is the
pure-Python reference with the identical API.  :mod:`slopecalc.kernels`
picks one at import time.
"""
