"""Hot numeric kernels with interchangeable backends.

Two implementations share one call signature: ``_numba`` (explicit loops
compiled with ``numba.njit``) and ``_numpy`` (vectorized numpy). The numba
path is used when numba imports cleanly, unless ``PEERDE_DISABLE_NUMBA`` is
set to a truthy value, in which case every kernel resolves to numpy.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}


def _numba_disabled():
    return os.environ.get("PEERDE_DISABLE_NUMBA", "").strip().lower() not in _FALSY


BACKEND = "numpy"
if not _numba_disabled():
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba missing
        _impl = None
if BACKEND == "numpy":
    from . import _numpy as _impl

from . import _numpy as numpy_backend  # noqa: E402

de_mutate = _impl.de_mutate
de_crossover = _impl.de_crossover
sphere = _impl.sphere
rosenbrock = _impl.rosenbrock
rastrigin = _impl.rastrigin
binary_nll = _impl.binary_nll
ordered_nll = _impl.ordered_nll
mann_whitney_auc = _impl.mann_whitney_auc

__all__ = [
    "BACKEND",
    "numpy_backend",
    "de_mutate",
    "de_crossover",
    "sphere",
    "rosenbrock",
    "rastrigin",
    "binary_nll",
    "ordered_nll",
    "mann_whitney_auc",
]
