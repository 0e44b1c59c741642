"""Pure numpy implementation of the pruned Gaussian pair sum.

Mirrors ``_kernel.pyx`` exactly in what it computes; used when the compiled
extension is unavailable or ``HOMCAVITY_PURE_PYTHON`` is set.
"""
import math

import numpy as np


def _window(target, a0, ha, na, cutoff):
    """Index bounds [lo, hi] of lattice points a0 + ha*i within cutoff of target."""
    if ha > 0:
        with np.errstate(over="ignore"):
            lo = np.ceil((target - cutoff - a0) / ha)
            hi = np.floor((target + cutoff - a0) / ha)
        lo = np.clip(lo, 0, na).astype(np.int64)
        hi = np.clip(hi, -1, na - 1).astype(np.int64)
    else:
        inside = np.abs(a0 - target) <= cutoff
        lo = np.where(inside, 0, na).astype(np.int64)
        hi = np.where(inside, na - 1, -1).astype(np.int64)
    return lo, hi


def pair_envelope_sum(wa, a0, ha, wb, b0, hb, offsets, dw, cutoff):
    """out[k] = sum_ij wa[i] wb[j] exp(-dw^2 (a0 + ha i - b0 - hb j + offsets[k])^2)

    Pairs whose argument exceeds ``cutoff`` in magnitude are skipped.
    ``ha`` and ``hb`` must be non-negative.
    """
    wa = np.ascontiguousarray(wa, dtype=np.float64)
    wb = np.ascontiguousarray(wb, dtype=np.float64)
    offsets = np.ascontiguousarray(offsets, dtype=np.float64)
    na, nb = wa.size, wb.size
    out = np.zeros(offsets.size)
    if na == 0 or nb == 0:
        return out
    jb = np.arange(nb)
    bpos = b0 + hb * jb
    dw2 = dw * dw
    for k, off in enumerate(offsets):
        target = bpos - off
        lo, hi = _window(target, a0, ha, na, cutoff)
        width = int((hi - lo).max()) + 1
        if width <= 0:
            continue
        idx = lo[:, None] + np.arange(width)[None, :]
        mask = idx <= hi[:, None]
        idx = np.minimum(idx, na - 1)
        x = a0 + ha * idx - target[:, None]
        terms = np.where(mask, wa[idx] * np.exp(-dw2 * x * x), 0.0)
        out[k] = float(np.dot(wb, terms.sum(axis=1)))
    return out


def cutoff_for(dw, eps_envelope):
    """Largest |x| for which exp(-dw^2 x^2) >= eps_envelope."""
    return math.sqrt(-math.log(eps_envelope)) / dw
