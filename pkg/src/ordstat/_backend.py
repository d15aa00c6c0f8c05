"""Select the compiled evaluation kernels when available.

``import ordstat._backend as bk`` and call ``bk.poly_exp_eval(...)``.  The
pure Python module is the reference implementation; the Cython build is an
accelerator with identical semantics.  ``bk.COMPILED`` says which one is
active, ``ORDSTAT_FORCE_PY=1`` in the environment forces the fallback
(used by the benchmark and by tests that compare the two).
"""

import os

if os.environ.get("ORDSTAT_FORCE_PY") == "1":
    from ordstat._poly_eval_py import (  # noqa: F401
        COMPILED,
        poly_exp_eval,
        poly_exp_eval_many,
        poly_exp_eval_scale,
    )
else:
    try:
        from ordstat._poly_eval import (  # noqa: F401
            COMPILED,
            poly_exp_eval,
            poly_exp_eval_many,
            poly_exp_eval_scale,
        )
    except ImportError:
        from ordstat._poly_eval_py import (  # noqa: F401
            COMPILED,
            poly_exp_eval,
            poly_exp_eval_many,
            poly_exp_eval_scale,
        )
