"""Search engine selection.

Two interchangeable engines implement the hot kernels: the compiled Cython
module ``_kernels`` and the pure-Python module ``_pure``.  The compiled one
is used when it imported successfully; set ``FREQCUBE_ENGINE=pure`` (or
``compiled``) before the first import to force a choice.  ``active`` is the
module-level binding the library uses; tests may rebind it to exercise a
specific engine.
"""

import os

from freqcube._engine import _pure
from freqcube._engine._common import (
    STATUS_COMPLETE,
    STATUS_FOUND,
    STATUS_LIMIT,
    STATUS_NODE_CAP,
    STATUS_NAMES,
)

_requested = os.environ.get("FREQCUBE_ENGINE", "auto").strip().lower()

_compiled = None
_compile_error = None
if _requested not in ("pure", "python"):
    try:
        from freqcube._engine import _kernels as _compiled
    except ImportError as exc:  # missing or broken extension build
        _compile_error = exc
        if _requested == "compiled":
            raise ImportError(
                "FREQCUBE_ENGINE=compiled but the extension failed to import"
            ) from exc

active = _compiled if _compiled is not None else _pure


def engine_name() -> str:
    return getattr(active, "ENGINE_NAME", "pure")


def available_engines():
    names = ["pure"]
    if _compiled is not None:
        names.append("compiled")
    return names


def get_engine(name: str):
    """Fetch an engine module by name ('pure' | 'compiled')."""
    if name == "pure":
        return _pure
    if name == "compiled":
        if _compiled is None:
            raise ImportError(
                f"compiled engine unavailable: {_compile_error!r}"
            )
        return _compiled
    raise ValueError(f"unknown engine {name!r}")
