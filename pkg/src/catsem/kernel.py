"""Selects the compiled kernel when it is importable, else the Python fallback.

Set ``CATSEM_PURE_PYTHON=1`` to force the fallback.
"""
import os

BACKEND = "python"

if os.environ.get("CATSEM_PURE_PYTHON", "") not in ("", "0"):
    from ._kernel_py import find_assoc_violation, search_functors
else:
    try:
        from ._kernel import find_assoc_violation, search_functors
        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._kernel_py import find_assoc_violation, search_functors

__all__ = ["BACKEND", "find_assoc_violation", "search_functors"]
