"""Shared numeric kernels.

All routines here are pure functions of ndarrays. They are the single
implementation behind the scalar APIs and their batched (row-wise)
counterparts, so the two always agree bit for bit.
"""
from __future__ import annotations

import numpy as np

# Guard for comparisons against accumulated probability masses. Mass sums
# carry rounding noise well below this; genuine breakpoints in test data
# are far above it.
MASS_GUARD = 1e-12


def pd_rows(values: np.ndarray, masses: np.ndarray, alpha: float) -> np.ndarray:
    """Row-wise minimal width of a value window carrying mass >= alpha.

    Parameters
    ----------
    values : (R, n) array
        One row per feature; columns share the weight vector `masses`.
    masses : (n,) array
        Positive weights summing to 1.
    alpha : float
        Required mass, in (0, 1].

    Returns
    -------
    (R,) array of window widths.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[None, :]
    n_rows, n = values.shape
    order = np.argsort(values, axis=1, kind="stable")
    sorted_vals = np.take_along_axis(values, order, axis=1)
    sorted_mass = np.asarray(masses, dtype=float)[order]
    prefix = np.concatenate(
        [np.zeros((n_rows, 1)), np.cumsum(sorted_mass, axis=1)], axis=1
    )
    # One flat searchsorted over all rows: prefix rows live in [0, 1 + eps],
    # so an offset of 2 per row keeps needles inside their own row.
    offsets = 2.0 * np.arange(n_rows)[:, None]
    flat = (prefix + offsets).ravel()
    needles = (prefix[:, :n] + (alpha - MASS_GUARD) + offsets).ravel()
    pos = np.searchsorted(flat, needles, side="left")
    pos -= np.repeat(np.arange(n_rows) * (n + 1), n)
    right = pos - 1  # window end index; mass of [i..right] >= alpha - guard
    rows = np.repeat(np.arange(n_rows), n)
    left = np.tile(np.arange(n), n_rows)
    valid = right < n
    widths = np.full(n_rows * n, np.inf)
    widths[valid] = (
        sorted_vals[rows[valid], right[valid]] - sorted_vals[rows[valid], left[valid]]
    )
    return widths.reshape(n_rows, n).min(axis=1)


def _run_end_indices(sorted_rows: np.ndarray) -> np.ndarray:
    """Index of the last duplicate of each entry in row-sorted data."""
    n_rows, n = sorted_rows.shape
    is_run_end = np.concatenate(
        [sorted_rows[:, 1:] != sorted_rows[:, :-1], np.ones((n_rows, 1), dtype=bool)],
        axis=1,
    )
    idx = np.where(is_run_end, np.arange(n)[None, :], n)
    return np.minimum.accumulate(idx[:, ::-1], axis=1)[:, ::-1]


def kf_rows(diffs: np.ndarray, masses: np.ndarray) -> np.ndarray:
    """Row-wise Ky Fan value of nonnegative difference profiles.

    For each row d, returns the smallest eps >= 0 with
    mass({d > eps}) <= eps. Exact over the finite candidate set
    {0} | {d_i} | {tail masses}; no grid is involved.
    """
    diffs = np.asarray(diffs, dtype=float)
    if diffs.ndim == 1:
        diffs = diffs[None, :]
    n_rows, n = diffs.shape
    order = np.argsort(diffs, axis=1, kind="stable")
    v = np.take_along_axis(diffs, order, axis=1)
    m = np.asarray(masses, dtype=float)[order]
    cum = np.cumsum(m, axis=1)
    total = cum[:, -1]
    run_end = _run_end_indices(v)
    rows = np.arange(n_rows)[:, None]
    mass_le = cum[rows, run_end]  # mass of {d <= v_i}, duplicates included
    tail = total[:, None] - mass_le
    best = np.min(np.maximum(v, tail), axis=1)
    # candidate eps = 0: feasible when nothing is strictly positive
    zero_le = np.where(v[:, 0] == 0.0, cum[np.arange(n_rows), run_end[:, 0]], 0.0)
    zero_tail = total - zero_le
    return np.minimum(best, np.maximum(0.0, zero_tail))


def kf_single(diffs: np.ndarray, masses: np.ndarray) -> float:
    return float(kf_rows(np.asarray(diffs, dtype=float)[None, :], masses)[0])


def window_tradeoff_values(deltas: np.ndarray, masses: np.ndarray) -> np.ndarray:
    """Row-wise exact translation-orbit Ky Fan distance (values only).

    For each row delta, min over shifts c of KF(delta - c) equals the
    minimum over support windows [delta_i, delta_j] of
    max(width / 2, 1 - window mass).
    """
    deltas = np.asarray(deltas, dtype=float)
    if deltas.ndim == 1:
        deltas = deltas[None, :]
    n_rows, n = deltas.shape
    order = np.argsort(deltas, axis=1, kind="stable")
    v = np.take_along_axis(deltas, order, axis=1)
    m = np.asarray(masses, dtype=float)[order]
    prefix = np.concatenate([np.zeros((n_rows, 1)), np.cumsum(m, axis=1)], axis=1)
    total = prefix[:, -1:]
    iidx, jidx = np.triu_indices(n)
    widths = v[:, jidx] - v[:, iidx]
    inside = prefix[:, jidx + 1] - prefix[:, iidx]
    scores = np.maximum(widths / 2.0, total - inside)
    return scores.min(axis=1)


def window_tradeoff_min(delta: np.ndarray, masses: np.ndarray) -> tuple[float, float]:
    """Exact translation-orbit Ky Fan distance with its optimal shift.

    Ties are broken toward the smallest window midpoint.
    """
    delta = np.asarray(delta, dtype=float)
    order = np.argsort(delta, kind="stable")
    v = delta[order]
    m = np.asarray(masses, dtype=float)[order]
    prefix = np.concatenate([[0.0], np.cumsum(m)])
    total = prefix[-1]
    iidx, jidx = np.triu_indices(len(v))
    widths = v[jidx] - v[iidx]
    inside = prefix[jidx + 1] - prefix[iidx]
    scores = np.maximum(widths / 2.0, total - inside)
    best = float(scores.min())
    centers = (v[iidx] + v[jidx]) / 2.0
    return best, float(centers[scores == best].min())
