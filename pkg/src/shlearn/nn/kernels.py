"""Kernel backend selection.

The compiled Cython extension is used when it was built; otherwise (or when
``SHLEARN_PURE_PYTHON=1``) the NumPy reference loops are used.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _rnn_py as python_backend


def _load_compiled() -> ModuleType | None:
    try:
        from . import _rnn
    except ImportError:
        return None
    return _rnn


compiled_backend = _load_compiled()

if compiled_backend is not None and os.environ.get("SHLEARN_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "cython"
    rnn_forward = compiled_backend.rnn_forward
    rnn_backward = compiled_backend.rnn_backward
else:
    BACKEND = "python"
    rnn_forward = python_backend.rnn_forward
    rnn_backward = python_backend.rnn_backward
