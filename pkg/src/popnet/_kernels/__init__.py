"""Hot loops behind the graph engine, with two interchangeable backends.

``_ckern`` is a Cython extension compiled at install time; ``_pykern`` is a
numpy/scipy fallback used when the extension is unavailable. Both expose the
same functions over raw CSR arrays and produce identical results (bitwise for
integer outputs, identical summation order for float outputs), so everything
above this layer is backend-agnostic.

Selection happens once at import. Set ``POPNET_KERNELS=py`` to force the
fallback or ``POPNET_KERNELS=c`` to require the extension; the default
(``auto``) prefers the extension and falls back silently.
"""

import importlib
import os

from . import _pykern

_choice = os.environ.get("POPNET_KERNELS", "auto").lower()
if _choice not in ("auto", "c", "py"):
    raise RuntimeError(f"POPNET_KERNELS must be auto, c or py (got {_choice!r})")

_ckern = None
if _choice in ("auto", "c"):
    try:
        _ckern = importlib.import_module("._ckern", __name__)
    except ImportError:
        if _choice == "c":
            raise RuntimeError(
                "POPNET_KERNELS=c but the compiled extension is not importable; "
                "reinstall the package or use POPNET_KERNELS=py"
            )

_impl = _ckern if _ckern is not None else _pykern

BACKEND = "c" if _ckern is not None else "py"

matvec = _impl.matvec
matmat = _impl.matmat
components = _impl.components
induce = _impl.induce
bfs_levels = _impl.bfs_levels
closeness_sums = _impl.closeness_sums
betweenness = _impl.betweenness

#: Both backend modules, for equivalence tests and benchmarks.
IMPLEMENTATIONS = {"py": _pykern}
if _ckern is not None:
    IMPLEMENTATIONS["c"] = _ckern
