"""Numba availability switch.

Set ``SLICECHROMA_DISABLE_NUMBA=1`` to route every kernel through its
pure-numpy path even when numba is importable. The flag is read once, at
import time; the compiled kernels stay importable so the two paths can be
compared side by side.
"""
from __future__ import annotations

import os

ENV_FLAG = "SLICECHROMA_DISABLE_NUMBA"

try:
    import numba  # noqa: F401

    NUMBA_IMPORTABLE = True
except ImportError:  # pragma: no cover - numba ships with the dev env
    NUMBA_IMPORTABLE = False


def _env_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


USE_NUMBA = NUMBA_IMPORTABLE and not _env_disabled()


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
