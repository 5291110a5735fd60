"""Kernel backend selection.

BRAINB_KERNEL=py forces the pure-Python kernels, BRAINB_KERNEL=native
requires the compiled ones (ImportError if the build is missing). Unset or
empty prefers native and falls back silently.
"""

from __future__ import annotations

import logging
import os
from types import ModuleType

from brainb import kernel_py

log = logging.getLogger(__name__)


def select_backend(name: str | None = None) -> ModuleType:
    if name is None:
        name = os.environ.get("BRAINB_KERNEL", "")
    if name == "py":
        return kernel_py
    try:
        from brainb import kernel  # type: ignore[attr-defined]

        return kernel
    except ImportError:
        if name == "native":
            raise
        log.debug("compiled kernels unavailable, using python fallback")
        return kernel_py


_backend = select_backend()

BACKEND_NAME: str = _backend.BACKEND_NAME
paint_window = _backend.paint_window
count_changed = _backend.count_changed
