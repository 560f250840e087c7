"""Hot kernels with a compiled core and a pure-Python fallback.

The compiled extension ``_celim`` is used when it imports and the input fits
in machine integers; otherwise the pure-Python twin runs on big integers.
Set ``VERDIER_PURE_PYTHON=1`` to force the fallback at import.
"""
from __future__ import annotations

import os

from ..errors import ArithmeticOverflowError
from ._pyelim import eliminate_units as py_eliminate_units

try:
    if os.environ.get("VERDIER_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from ._celim import eliminate_units as c_eliminate_units
except ImportError:
    c_eliminate_units = None

BACKEND = "cython" if c_eliminate_units is not None else "python"

_settings = {"bigint_fallback": True}


def set_bigint_fallback(enabled: bool) -> None:
    """Allow (default) or forbid promotion to big integers on overflow."""
    _settings["bigint_fallback"] = bool(enabled)


def bigint_fallback_enabled() -> bool:
    return _settings["bigint_fallback"]


def eliminate_units(nrows: int, ncols: int, entries, modulus: int = 0):
    """Dispatch to the compiled kernel, falling back to Python on overflow."""
    entries = list(entries)
    if c_eliminate_units is not None:
        try:
            return c_eliminate_units(nrows, ncols, entries, modulus)
        except OverflowError:
            if not _settings["bigint_fallback"]:
                raise ArithmeticOverflowError(
                    "int64 overflow in elimination and big-integer fallback is disabled"
                ) from None
    return py_eliminate_units(nrows, ncols, entries, modulus, bigint=_settings["bigint_fallback"])


__all__ = [
    "BACKEND",
    "eliminate_units",
    "py_eliminate_units",
    "c_eliminate_units",
    "set_bigint_fallback",
    "bigint_fallback_enabled",
]
