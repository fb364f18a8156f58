"""Correlated purification of noisy two-electron reduced density matrices.

The heavy lifting lives in the compiled extension ``rdmpurify._core``; this
package re-exports its public surface.  When running against a plain CMake
build (no installed wheel), point ``RDMPURIFY_EXT_DIR`` at the directory
containing the built extension.
"""

import os
import sys

try:
    from rdmpurify._core import *  # noqa: F401,F403
    from rdmpurify._core import __version__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree fallback
    _ext_dir = os.environ.get("RDMPURIFY_EXT_DIR")
    if not _ext_dir:
        raise
    sys.path.insert(0, _ext_dir)
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
