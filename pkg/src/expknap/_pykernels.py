"""Pure-Python selection kernels.

Same signatures and results as the compiled ``_ckernels``. Every kernel
writes the 0-based arrival steps it selects into ``out`` and returns how many
it wrote.
"""
import heapq

import numpy as np

OFFLINE = 0
DECISION = 1


def _record_maxima(vals, t):
    vals = np.asarray(vals, dtype=np.float64)
    if vals.size <= t:
        return np.empty(0, dtype=np.intp)
    prev = np.empty_like(vals)
    prev[0] = -np.inf
    np.maximum.accumulate(vals[:-1], out=prev[1:])
    return np.flatnonzero(vals[t:] > prev[t:]) + t


def threshold_select(vals, t, out):
    sel = _record_maxima(vals, t)
    out[: sel.size] = sel
    return int(sel.size)


def classical_select(vals, t, out):
    sel = _record_maxima(vals, t)
    if sel.size == 0:
        return 0
    out[0] = sel[0]
    return 1


def ksec_select(vals, k, t, out):
    vals = vals.tolist() if hasattr(vals, "tolist") else list(vals)
    heap = []
    for p in range(t):
        v = vals[p]
        if len(heap) < k:
            heapq.heappush(heap, v)
        elif v > heap[0]:
            heapq.heapreplace(heap, v)
    c = 0
    for p in range(t, len(vals)):
        v = vals[p]
        if len(heap) < k:
            heapq.heappush(heap, v)
        elif v > heap[0]:
            heapq.heapreplace(heap, v)
        else:
            continue
        out[c] = p
        c += 1
    return c


def aug_on_select(b, w, ids, t, ref_b, ref_w, ref_id, out):
    # max-heap on (b, id) through negated keys
    b, w, ids = _as_list(b), _as_list(w), _as_list(ids)
    heap = [(-float(ref_b[j]), -int(ref_id[j]), float(ref_w[j]), OFFLINE) for j in range(len(ref_b))]
    heapq.heapify(heap)
    c = 0
    if not heap:
        return 0
    for p in range(t, len(b)):
        nb, _, wk, origin = heap[0]
        bp = b[p]
        if bp < -nb:
            if origin == OFFLINE and w[p] <= wk:
                out[c] = p
                c += 1
            heapq.heapreplace(heap, (-bp, -ids[p], w[p], DECISION))
    return c


def _as_list(a):
    return a.tolist() if hasattr(a, "tolist") else list(a)
