"""Scalar metrics on finitely supported real measures and feature pairs.

Partial diameter and Levy mean act on DiscreteMeasureR; the Ky Fan
metric compares two feature value lists under a common weight vector;
the Prohorov distance compares two measures on the line. All of them
are computed exactly over finite candidate sets, no grids involved
(a grid oracle for the Ky Fan metric is kept for testing only).
"""
from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

from ._kernels import MASS_GUARD, kf_single
from .core import DiscreteMeasureR, ProbVector
from .errors import DimensionMismatch, EmptySet, InvalidAlpha, ValidationError


@dataclass(frozen=True)
class KyFanConfig:
    """Grid density for the Ky Fan oracle used in tests."""

    candidate_refinement: int = 1000

    def __post_init__(self):
        if self.candidate_refinement < 1:
            raise ValidationError("candidate_refinement must be >= 1")


def partial_diameter(mu: DiscreteMeasureR, alpha: float) -> float:
    """Smallest diameter of a set carrying mass at least alpha.

    For a finitely supported measure the infimum over Borel sets is
    attained on a closed interval with endpoints in the support (the
    convex hull of any set has the same diameter and at least the same
    mass), so a minimal support window realizes it. Mass comparisons
    use a weak inequality with a MASS_GUARD allowance for float noise
    in accumulated sums.
    """
    if not (0.0 < alpha <= 1.0):
        raise InvalidAlpha(f"alpha must be in (0, 1], got {alpha!r}")
    v = mu.values
    prefix = np.concatenate([[0.0], np.cumsum(mu.masses)])
    need = prefix[:-1] + (alpha - MASS_GUARD)
    pos = np.searchsorted(prefix, need, side="left")  # window end + 1, per start
    right = pos - 1
    valid = right < v.size
    widths = v[right[valid]] - v[np.arange(v.size)[valid]]
    return float(widths.min())


def levy_mean(mu: DiscreteMeasureR) -> float:
    """Smallest support value whose cumulative mass reaches 1/2."""
    cum = np.cumsum(mu.masses)
    idx = int(np.searchsorted(cum, 0.5 - MASS_GUARD, side="left"))
    return float(mu.values[min(idx, mu.values.size - 1)])


def ky_fan(f, g, mu: ProbVector) -> float:
    """Ky Fan distance between two feature value lists under mu.

    The smallest eps >= 0 with mu({|f - g| > eps}) <= eps. The
    feasibility function is a right-continuous step function of eps, so
    the minimum is attained on the finite candidate set of distinct
    difference values and tail masses; it is computed there exactly.
    Always at most 1.
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape or f.ndim != 1 or f.size != len(mu):
        raise DimensionMismatch("feature lists and weights must share one length")
    return kf_single(np.abs(f - g), mu.weights)


def ky_fan_grid_oracle(f, g, mu: ProbVector, config: KyFanConfig) -> float:
    """Grid approximation of ky_fan, used as a test oracle.

    Scans eps over a uniform grid on [0, 1]; the result overshoots the
    exact value by at most one grid step.
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    d = np.abs(f - g)
    w = mu.weights
    for eps in np.linspace(0.0, 1.0, config.candidate_refinement + 1):
        if float(w[d > eps].sum()) <= eps:
            return float(eps)
    return 1.0


def _routable_mass(nu_masses, mu_masses, adjacency) -> float:
    """Maximum nu-mass routable to mu across allowed atom pairs."""
    G = nx.DiGraph()
    for j, wj in enumerate(nu_masses):
        G.add_edge("s", ("a", j), capacity=float(wj))
    for i, wi in enumerate(mu_masses):
        G.add_edge(("b", i), "t", capacity=float(wi))
    for j, i in np.argwhere(adjacency):
        G.add_edge(("a", int(j)), ("b", int(i)), capacity=2.0)
    if not G.has_node("s") or not G.has_node("t"):
        return 0.0
    return float(nx.maximum_flow_value(G, "s", "t"))


def prohorov(mu: DiscreteMeasureR, nu: DiscreteMeasureR) -> float:
    """Prohorov distance, one-sided form.

    inf of eps >= 0 such that mu(U(A, eps)) >= nu(A) - eps for every
    Borel A, with U the open eps-neighborhood. Writing D(eps) for the
    worst-case deficiency max_A (nu(A) - mu(U(A, eps))), the distance is
    min over candidate thresholds d_k (the distinct atom distances,
    plus 0) of max(d_k, D_k), where D_k uses adjacency |x - y| <= d_k.
    Each D_k equals 1 minus a bipartite max-flow value, which encodes
    the subset condition without enumerating subsets. D is
    nonincreasing and the threshold sequence increasing, so the
    crossing is located by binary search.
    """
    dists = np.abs(nu.values[:, None] - mu.values[None, :])
    cands = np.unique(np.concatenate([[0.0], dists.ravel()]))

    cache: dict[int, float] = {}

    def deficiency(k: int) -> float:
        if k not in cache:
            flow = _routable_mass(nu.masses, mu.masses, dists <= cands[k])
            cache[k] = max(0.0, float(nu.masses.sum()) - flow)
        return cache[k]

    lo, hi = 0, len(cands) - 1
    if deficiency(lo) <= cands[lo]:
        return float(cands[lo])
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if deficiency(mid) <= cands[mid]:
            hi = mid
        else:
            lo = mid
    return float(min(deficiency(hi - 1), cands[hi]))


def hausdorff(A, B, dist) -> float:
    """Hausdorff distance between two index sets under a distance table.

    max over a of min over b of dist[a][b], symmetrized.
    """
    A = list(A)
    B = list(B)
    if not A or not B:
        raise EmptySet("both sets must be nonempty")
    dist = np.asarray(dist, dtype=float)
    sub = dist[np.ix_(A, B)]
    return float(max(sub.min(axis=1).max(), sub.min(axis=0).max()))


def hausdorff_from_matrix(cross: np.ndarray) -> float:
    """Hausdorff value of a complete cross-distance matrix."""
    cross = np.asarray(cross, dtype=float)
    if cross.size == 0:
        raise EmptySet("cross-distance matrix must be nonempty")
    return float(max(cross.min(axis=1).max(), cross.min(axis=0).max()))
