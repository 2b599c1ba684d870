"""European option pricing and calibration in a two-risky-asset market with
no traded riskless bond.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its public surface.  When running against a build tree (no
install), point ``NOBOND_CORE_DIR`` at the directory containing the compiled
module.
"""

try:
    from ._core import *  # noqa: F401,F403
    from . import _core as _impl
except ImportError:  # build-tree layout
    import os
    import sys

    _core_dir = os.environ.get("NOBOND_CORE_DIR")
    if _core_dir and _core_dir not in sys.path:
        sys.path.insert(0, _core_dir)
    from _core import *  # noqa: F401,F403
    import _core as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
__version__ = "0.1.0"
