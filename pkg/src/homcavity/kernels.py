"""Backend selection for the hot pair-sum kernel.

The compiled extension is used when it was built; set the environment
variable ``HOMCAVITY_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _kernel_py
from ._kernel_py import cutoff_for

python_pair_envelope_sum = _kernel_py.pair_envelope_sum

try:
    if os.environ.get("HOMCAVITY_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python backend requested")
    from ._kernel import pair_envelope_sum as compiled_pair_envelope_sum
except ImportError:
    compiled_pair_envelope_sum = None

if compiled_pair_envelope_sum is not None:
    pair_envelope_sum = compiled_pair_envelope_sum
    BACKEND = "cython"
else:
    pair_envelope_sum = python_pair_envelope_sum
    BACKEND = "python"

__all__ = ["pair_envelope_sum", "python_pair_envelope_sum", "compiled_pair_envelope_sum",
           "cutoff_for", "BACKEND"]
