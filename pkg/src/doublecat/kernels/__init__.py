"""Kernel backend selection.

Two interchangeable implementations of the hot loops live here: numba-compiled
loops (``_numba``) and vectorized numpy (``_numpy``). ``DCAT_BACKEND`` picks
one at import time (``numba``, the default, or ``numpy``); ``use_backend``
switches temporarily. If numba cannot be imported the numpy path is used.
"""

from __future__ import annotations

import logging
import os
from contextlib import contextmanager
from types import ModuleType

from . import _numpy

log = logging.getLogger(__name__)

_BACKENDS: dict[str, ModuleType] = {"numpy": _numpy}

try:
    from . import _numba
except ImportError as exc:  # pragma: no cover - numba is a declared dependency
    log.warning("numba unavailable (%s); using the numpy kernels", exc)
else:
    _BACKENDS["numba"] = _numba


def available() -> list[str]:
    return sorted(_BACKENDS)


def _resolve(name: str) -> ModuleType:
    name = name.strip().lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel backend {name!r}; expected 'numba' or 'numpy'")
    return _BACKENDS.get(name, _numpy)


_current = _resolve(os.environ.get("DCAT_BACKEND", "numba"))


def backend() -> ModuleType:
    return _current


def get(name: str) -> ModuleType:
    return _resolve(name)


def set_backend(name: str) -> None:
    global _current
    _current = _resolve(name)


@contextmanager
def use_backend(name: str):
    global _current
    prev = _current
    _current = _resolve(name)
    try:
        yield _current
    finally:
        _current = prev
