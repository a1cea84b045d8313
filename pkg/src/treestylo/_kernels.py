"""Select the kernel implementation at import time.

The compiled ``_ckernels`` extension is used when it was built; otherwise,
or when ``TREESTYLO_PURE_PYTHON`` is set to a non-empty value, the
pure-Python ``_pykernels`` module is used. ``BACKEND`` names the choice.
"""
import os

if os.environ.get("TREESTYLO_PURE_PYTHON"):
    from ._pykernels import (canonical, label_counts, level_counts,
                             parse_sexprs, subtree_counts, truncated)
    BACKEND = "python"
else:
    try:
        from ._ckernels import (canonical, label_counts, level_counts,
                                parse_sexprs, subtree_counts, truncated)
        BACKEND = "cython"
    except ImportError:
        from ._pykernels import (canonical, label_counts, level_counts,
                                 parse_sexprs, subtree_counts, truncated)
        BACKEND = "python"

__all__ = ["BACKEND", "canonical", "label_counts", "level_counts",
           "parse_sexprs", "subtree_counts", "truncated"]
