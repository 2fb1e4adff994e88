"""Kernel backend selection.

The compiled ``_speedups`` extension is used when it imports; otherwise,
or when ``COASE_PURE_PYTHON=1`` is set, the pure-Python twins are used.
``BACKEND`` names the active choice.
"""

import os

from . import _purekernels as pure

try:
    from . import _speedups as compiled
except ImportError:
    compiled = None

_force_pure = os.environ.get("COASE_PURE_PYTHON", "") not in ("", "0")
_active = pure if _force_pure or compiled is None else compiled
BACKEND = "python" if _active is pure else "cython"

bilateral_trades = _active.bilateral_trades
improving_allocations = _active.improving_allocations
potential = _active.potential


def backends():
    """Available kernel modules by name (the compiled one only if built)."""
    out = {"python": pure}
    if compiled is not None:
        out["cython"] = compiled
    return out
