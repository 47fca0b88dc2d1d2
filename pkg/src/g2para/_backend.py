"""Select the compiled core when it is importable, else the pure-Python one.

Set ``G2PARA_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("G2PARA_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._ccore import (  # noqa: F401
            QuadExt,
            bilinear,
            contract_first,
            eval3,
            matmul,
            matvec,
            pullback3,
        )

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._kernels_py import (  # noqa: F401
        bilinear,
        contract_first,
        eval3,
        matmul,
        matvec,
        pullback3,
    )
    from ._qext_py import QuadExt  # noqa: F401
