"""Backend selection for the selection kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise, or
when ``EXPKNAP_PURE_PYTHON`` is set to a non-empty value, the pure-Python
``_pykernels`` module is used. Both produce identical selections.
"""
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def available_backends() -> dict:
    out = {"python": _pykernels}
    if _ckernels is not None:
        out["cython"] = _ckernels
    return out


def get_backend(name: str | None = None):
    if name is None:
        if os.environ.get("EXPKNAP_PURE_PYTHON") or _ckernels is None:
            return _pykernels
        return _ckernels
    try:
        return available_backends()[name]
    except KeyError:
        raise ValueError(f"backend {name!r} is not available") from None


backend = get_backend()
BACKEND_NAME = "cython" if backend is _ckernels else "python"

threshold_select = backend.threshold_select
classical_select = backend.classical_select
ksec_select = backend.ksec_select
aug_on_select = backend.aug_on_select
