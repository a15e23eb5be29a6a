"""Pure-numpy decode kernels over lane-major (n, F) arrays.

Lane s of column axis F is one frame.  The per-lane arithmetic order is
the contract shared with the numba kernels: checks are visited in
ascending row order, edges in row order, and variable sums accumulate
in column-adjacency position order.  With early termination, converged
lanes freeze: their messages, posteriors and bits are never written
again.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"


def _syndrome_ok_lanes(code, bits):
    """Zero-syndrome flag per lane for hard bits of shape (n, F)."""
    parity = np.bitwise_xor.reduceat(bits[code.edge_var, :], code.row_ptr[:-1], axis=0)
    return ~parity.any(axis=0)


def _check_messages(vals, mask, norm, clamp):
    """Normalized min-sum row update on padded rows.

    vals : (m, dmax, F) gathered inputs; slots outside ``mask`` are inert.
    Returns messages of the same shape (garbage in masked-out slots).
    """
    m, dmax, nf = vals.shape
    a = np.where(mask[:, :, None], np.abs(vals), np.inf)
    first = np.argmin(a, axis=1)
    min1 = np.take_along_axis(a, first[:, None, :], axis=1)[:, 0, :]
    rest = a.copy()
    np.put_along_axis(rest, first[:, None, :], np.inf, axis=1)
    min2 = rest.min(axis=1)
    neg = (vals < 0.0) & mask[:, :, None]
    total_sign = 1.0 - 2.0 * (neg.sum(axis=1) & 1)
    pos = np.arange(dmax)[None, :, None]
    mag = np.where(pos == first[:, None, :], min2[:, None, :], min1[:, None, :])
    sign_in = np.where(neg, -1.0, 1.0)
    out = norm * (total_sign[:, None, :] * sign_in * mag)
    np.clip(out, -clamp, clamp, out=out)
    return out


def _var_totals(code, intrinsic, c2v):
    """intrinsic + incident check messages, accumulated in position order."""
    total = intrinsic.copy()
    for t in range(code.max_col_degree):
        sel = code.col_pad_mask[:, t]
        total[sel] += c2v[code.col_pad_edge[sel, t], :]
    return total


def decode_flooding(code, llr, max_iters, early_term, norm, clamp):
    """Two-phase min-sum.  Returns (bits, iterations, syndrome_ok, posterior)."""
    n, nf = llr.shape
    intrinsic = np.clip(llr, -clamp, clamp)
    post = intrinsic.copy()
    v2c = intrinsic[code.edge_var, :].copy()
    c2v = np.zeros((code.edge_count, nf))
    bits = np.zeros((n, nf), dtype=np.uint8)
    iters = np.full(nf, max_iters, dtype=np.int64)
    ok = np.zeros(nf, dtype=bool)
    active = np.ones(nf, dtype=bool)

    for it in range(1, max_iters + 1):
        vals = v2c[code.row_pad_edge, :]
        out = _check_messages(vals, code.row_pad_mask, norm, clamp)
        new_c2v = out[code.row_pad_mask]
        if code.deg1_rows.size:
            new_c2v[code.row_ptr[code.deg1_rows]] = norm * clamp
        total = _var_totals(code, intrinsic, new_c2v)
        new_post = np.clip(total, -clamp, clamp)
        new_v2c = np.clip(total[code.edge_var, :] - new_c2v, -clamp, clamp)

        post[:, active] = new_post[:, active]
        v2c[:, active] = new_v2c[:, active]
        c2v[:, active] = new_c2v[:, active]
        bits[:, active] = (new_post[:, active] < 0.0)

        if early_term:
            converged = active & _syndrome_ok_lanes(code, bits)
            iters[converged] = it
            ok[converged] = True
            active &= ~converged
            if not active.any():
                break

    if not early_term:
        ok[:] = _syndrome_ok_lanes(code, bits)
    return bits, iters, ok, post


def _layered_row_update(code, j, post, msg, norm, clamp, active=None):
    """One in-place layered row update; ``active`` selects lanes to commit."""
    lo, hi = int(code.row_ptr[j]), int(code.row_ptr[j + 1])
    idx = code.edge_var[lo:hi]
    d = hi - lo
    ext = post[idx, :] - msg[lo:hi, :]
    if d == 1:
        new = np.full((1, ext.shape[1]), norm * clamp)
    else:
        a = np.abs(ext)
        first = np.argmin(a, axis=0)
        min1 = np.take_along_axis(a, first[None, :], axis=0)[0]
        rest = a.copy()
        np.put_along_axis(rest, first[None, :], np.inf, axis=0)
        min2 = rest.min(axis=0)
        neg = ext < 0.0
        total_sign = 1.0 - 2.0 * (neg.sum(axis=0) & 1)
        mag = np.where(np.arange(d)[:, None] == first[None, :],
                       min2[None, :], min1[None, :])
        new = norm * (total_sign[None, :] * np.where(neg, -1.0, 1.0) * mag)
        np.clip(new, -clamp, clamp, out=new)
    new_post = ext + new
    np.clip(new_post, -clamp, clamp, out=new_post)
    if active is None:
        msg[lo:hi, :] = new
        post[idx, :] = new_post
    else:
        msg[lo:hi, active] = new[:, active]
        post[np.ix_(idx, np.nonzero(active)[0])] = new_post[:, active]


def decode_layered(code, llr, max_iters, early_term, norm, clamp):
    """Horizontal layered min-sum, rows ascending, posteriors updated in place."""
    n, nf = llr.shape
    post = np.clip(llr, -clamp, clamp)
    msg = np.zeros((code.edge_count, nf))
    bits = np.zeros((n, nf), dtype=np.uint8)
    iters = np.full(nf, max_iters, dtype=np.int64)
    ok = np.zeros(nf, dtype=bool)
    active = np.ones(nf, dtype=bool)

    for it in range(1, max_iters + 1):
        lanes = None if active.all() else active
        for j in range(code.m):
            _layered_row_update(code, j, post, msg, norm, clamp, lanes)
        bits[:, active] = (post[:, active] < 0.0)

        if early_term:
            converged = active & _syndrome_ok_lanes(code, bits)
            iters[converged] = it
            ok[converged] = True
            active &= ~converged
            if not active.any():
                break

    if not early_term:
        ok[:] = _syndrome_ok_lanes(code, bits)
    return bits, iters, ok, post


def warmup():
    """Nothing to precompile for the numpy path."""
