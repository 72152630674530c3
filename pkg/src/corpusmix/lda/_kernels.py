"""Pick the compiled E-step when available, else the numpy fallback.

Set ``CORPUSMIX_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _vem_py

BACKEND = "python"
if not os.environ.get("CORPUSMIX_PURE_PYTHON"):
    try:
        from . import _vem as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _vem_py
else:
    _impl = _vem_py

estep = _impl.estep
word_bound = _impl.word_bound


def get_backend(name=None):
    """Return the kernel module for *name* ('cython', 'python' or None for default)."""
    if name is None:
        return _impl
    if name == "python":
        return _vem_py
    if name == "cython":
        from . import _vem
        return _vem
    raise ValueError(f"unknown backend {name!r}")


def backend_name(kernel) -> str:
    return "python" if kernel is _vem_py else "cython"
