"""Select the amplify kernel at import: compiled extension if available,
pure-numpy otherwise.  Set AMPBOOST_PURE_PYTHON=1 to force the fallback.
"""

import os

if os.environ.get("AMPBOOST_PURE_PYTHON"):
    from ._kernels_py import amplify_classes

    BACKEND = "pure-python"
else:
    try:
        from ._kernels import amplify_classes

        BACKEND = "compiled"
    except ImportError:
        from ._kernels_py import amplify_classes

        BACKEND = "pure-python"

__all__ = ["amplify_classes", "BACKEND"]
