"""Kernel backend selection.

The compiled module is used when it was built; setting ``IMPCOMP_PURE=1``
forces the plain-Python reference implementations.
"""
import os

from . import _pykernels

pure = _pykernels

if os.environ.get("IMPCOMP_PURE"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

compiled = _impl if BACKEND == "cython" else None

subset_folds = _impl.subset_folds
subset_and = _impl.subset_and
app_table = _impl.app_table
encoded_meet_table = _impl.encoded_meet_table
lam_reduce = _impl.lam_reduce
map_witnesses = _impl.map_witnesses
meet_distribution_violations = _impl.meet_distribution_violations
joins_violations = _impl.joins_violations
exists_all = _impl.exists_all
