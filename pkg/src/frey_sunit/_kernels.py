"""Kernel selection: compiled core when importable, pure-Python fallback otherwise.

Set ``FREY_SUNIT_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("FREY_SUNIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

sunit_box_sieve = _impl.sunit_box_sieve
squarefree_block = _impl.squarefree_block
count_squarefree_residues = _impl.count_squarefree_residues


def backends():
    """Available implementations by name (used by tests and the benchmark)."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
