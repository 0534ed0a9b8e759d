"""Mod-p elimination kernels, compiled when available.

The Cython extension ``_kernels`` is preferred; the numpy module
``_kernels_py`` is used when the extension was not built or when
``FIHOM_KERNELS=python`` is set.  Both expose ``echelon`` and
``bareiss_rank`` with identical semantics.
"""

import importlib
import os

import numpy as np


def load_impl(name: str):
    if name == "compiled":
        return importlib.import_module("fihom.exactla._kernels")
    if name == "python":
        return importlib.import_module("fihom.exactla._kernels_py")
    raise ValueError(f"unknown kernel implementation {name!r}")


def _select():
    if os.environ.get("FIHOM_KERNELS", "").lower() == "python":
        return "python", load_impl("python")
    try:
        return "compiled", load_impl("compiled")
    except ImportError:
        return "python", load_impl("python")


IMPL, _impl = _select()


def _prepared(A: np.ndarray, p: int) -> np.ndarray:
    return np.ascontiguousarray(np.mod(A, p), dtype=np.int64)


def echelon_modp(A: np.ndarray, p: int, reduced: bool = False, impl=None) -> tuple[np.ndarray, list[int]]:
    """Return ``(E, pivots)`` where ``E`` is a row echelon form of ``A``."""
    work = _prepared(A, p)
    if work.size == 0:
        return work, []
    pivots = (impl or _impl).echelon(work, p, reduced)
    return work, list(pivots)


def bareiss_rank_modp(A: np.ndarray, p: int, impl=None) -> int:
    work = _prepared(A, p)
    if work.size == 0:
        return 0
    return int((impl or _impl).bareiss_rank(work, p))
