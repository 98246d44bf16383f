"""Quotients, bounded feature measurements, and domination checking.

A quotient keeps only a chosen list of feature rows and identifies the
points those rows cannot separate. Identification uses exact value
equality; noisy data should be pre-rounded by the caller (the CLI
exposes a rounding flag), since tolerance-based identification would
break transitivity.

An (N, R)-measurement is the quotient by at most N generator rows, each
clipped into [-R, R]. Domination search enumerates measure-compatible
point maps with mass pruning and tests pulled-back features against the
source family orbits; `Unknown` is a first-class outcome when the
search budget runs out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import FiniteGDS, ProbVector
from .errors import EmptyG, InvalidSpec
from .families import ClipMap, dist_to_orbit

MASS_MATCH_TOL = 1e-9


@dataclass(frozen=True)
class MeasurementSpec:
    """A choice of generator rows and a clip bound for a measurement."""

    feature_indices: tuple[int, ...]
    R: float

    def __post_init__(self):
        object.__setattr__(self, "feature_indices", tuple(self.feature_indices))
        if len(self.feature_indices) == 0:
            raise InvalidSpec("at least one feature index is required")
        if len(set(self.feature_indices)) != len(self.feature_indices):
            raise InvalidSpec("feature indices must be distinct")
        if not self.R > 0:
            raise InvalidSpec("clip bound R must be positive (or inf)")

    def to_json(self) -> dict:
        return {
            "features": list(self.feature_indices),
            "R": "inf" if math.isinf(self.R) else self.R,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MeasurementSpec":
        r = obj["R"]
        return cls(tuple(int(i) for i in obj["features"]), math.inf if r == "inf" else float(r))


def quotient(X: FiniteGDS, G) -> tuple[FiniteGDS, np.ndarray]:
    """Quotient of X by the feature rows G.

    Points are identified when all rows of G agree on them exactly;
    masses are summed. Returns the quotient data set together with the
    point map (an array sending each source index to its class index).
    The map pushes the measure forward exactly and pulls every result
    feature back to a row of G, so it is a domination.
    """
    G = np.asarray(G, dtype=float) + 0.0
    if G.ndim != 2 or G.shape[0] == 0:
        raise EmptyG("at least one feature row is required")
    if G.shape[1] != X.n_points:
        raise EmptyG(f"rows of length {G.shape[1]} for {X.n_points} points")
    classes: dict[bytes, int] = {}
    qmap = np.empty(X.n_points, dtype=int)
    reps: list[int] = []
    for i in range(X.n_points):
        key = G[:, i].tobytes()
        if key not in classes:
            classes[key] = len(reps)
            reps.append(i)
        qmap[i] = classes[key]
    masses = np.bincount(qmap, weights=X.masses, minlength=len(reps))
    new_gens = G[:, reps]
    ids = tuple(X.point_ids[i] for i in reps)
    result = FiniteGDS(ids, new_gens, X.family, ProbVector(masses))
    return result, qmap


def measurement(X: FiniteGDS, spec: MeasurementSpec) -> FiniteGDS:
    """Quotient of X by the clipped rows b_R of the selected generators.

    The result has at most N = len(spec.feature_indices) generators, all
    valued in [-R, R], and is dominated by X.
    """
    if any(i < 0 or i >= X.n_generators for i in spec.feature_indices):
        raise InvalidSpec(f"feature index out of range for {X.n_generators} generators")
    clip = ClipMap.bound(spec.R) if math.isfinite(spec.R) else ClipMap.identity()
    rows = np.vstack([clip.apply(X.generators[i]) for i in spec.feature_indices])
    result, _ = quotient(X, rows)
    return result


@dataclass(frozen=True)
class MeasurementSample:
    """Measurements produced by enumerate_measurements."""

    members: tuple[FiniteGDS, ...]
    specs: tuple[MeasurementSpec, ...]
    exhaustive: bool


def enumerate_measurements(
    X: FiniteGDS, N: int, R: float, budget: int, seed: int = 0
) -> MeasurementSample:
    """All (or a seeded sample of) measurements by generator subsets of
    size min(N, generator count).

    Feature sets may repeat entries without changing the quotient, so
    any measurement by at most N features is realized by a subset of
    exactly this size; specs are canonicalized to such subsets. When
    the subset count fits the budget the enumeration is exhaustive
    (lexicographic); otherwise exactly `budget` subsets are drawn
    uniformly, with replacement across draws. Deterministic for fixed
    arguments; isomorphic duplicate results are retained.
    """
    if N < 1:
        raise InvalidSpec("N must be at least 1")
    if budget < 1:
        raise InvalidSpec("budget must be at least 1")
    g = X.n_generators
    k = min(N, g)
    total = math.comb(g, k)
    specs: list[MeasurementSpec] = []
    if total <= budget:
        for combo in combinations(range(g), k):
            specs.append(MeasurementSpec(combo, R))
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        for _ in range(budget):
            combo = tuple(sorted(int(i) for i in rng.choice(g, size=k, replace=False)))
            specs.append(MeasurementSpec(combo, R))
        exhaustive = False
    members = tuple(measurement(X, spec) for spec in specs)
    return MeasurementSample(members, tuple(specs), exhaustive)


@dataclass(frozen=True)
class DominationVerdict:
    """Outcome of a domination search.

    status is one of "Dominates", "NotDominated", "Unknown". A
    Dominates verdict carries the witness point map; NotDominated
    carries a certificate describing the best failed candidate. For
    sampled lip1 families orbit membership is only sample-certified,
    which the note records.
    """

    status: str
    witness_map: tuple[int, ...] | None = None
    certificate: str | None = None
    note: str | None = None


def _mass_compatible_maps(x_masses, y_masses, budget):
    """Yield complete maps X -> Y whose preimage masses match Y's; stops
    after `budget` complete maps and reports whether it finished."""
    nx_, ny_ = len(x_masses), len(y_masses)
    maps: list[tuple[int, ...]] = []
    assign = [0] * nx_
    remaining = np.array(y_masses, dtype=float)
    truncated = False

    def rec(i):
        nonlocal truncated
        if truncated:
            return
        if i == nx_:
            if np.all(np.abs(remaining) <= MASS_MATCH_TOL):
                if len(maps) >= budget:
                    truncated = True
                    return
                maps.append(tuple(assign))
            return
        for y in range(ny_):
            if remaining[y] >= x_masses[i] - MASS_MATCH_TOL:
                remaining[y] -= x_masses[i]
                assign[i] = y
                rec(i + 1)
                remaining[y] += x_masses[i]
                if truncated:
                    return
        return

    rec(0)
    return maps, not truncated


def check_domination(
    X: FiniteGDS, Y: FiniteGDS, tol: float = 1e-9, budget: int = 5000
) -> DominationVerdict:
    """Does X dominate Y (a measure-preserving map pulling Y's features
    into X's family orbits)?

    Point maps are enumerated in canonical order with mass pruning, so
    the reported witness is schedule-independent. Every pulled-back
    Y-generator must sit within `tol` of some X-generator orbit. With
    more candidate maps than `budget` the verdict is Unknown, with the
    best candidate seen recorded in the certificate.
    """
    maps, complete = _mass_compatible_maps(X.masses, Y.masses, budget)
    note = None
    if X.family.kind == "lip1":
        note = "orbit membership sample-certified only (lip1 family)"
    best_score, best_map = math.inf, None
    for cand in maps:
        cand_arr = np.asarray(cand)
        worst = 0.0
        for grow in Y.generators:
            pulled = grow[cand_arr]
            dist = min(
                dist_to_orbit(pulled, xrow, X.family, X.mu, tol).value
                for xrow in X.generators
            )
            worst = max(worst, dist)
            if worst > tol and worst >= best_score:
                break
        if worst <= tol:
            return DominationVerdict("Dominates", witness_map=cand, note=note)
        if worst < best_score:
            best_score, best_map = worst, cand
    if not complete:
        cert = (
            f"budget of {budget} candidate maps exhausted; best candidate "
            f"{best_map} missed orbits by {best_score:.6g}"
            if best_map is not None
            else f"budget of {budget} candidate maps exhausted"
        )
        return DominationVerdict("Unknown", certificate=cert, note=note)
    if best_map is None:
        cert = "no measure-compatible point map exists"
    else:
        cert = (
            f"best candidate {best_map} pulls some feature {best_score:.6g} "
            f"away from the source orbits (tol {tol:.3g})"
        )
    return DominationVerdict("NotDominated", certificate=cert, note=note)


def rounded(X: FiniteGDS, decimals: int) -> tuple[FiniteGDS, np.ndarray]:
    """Round generator values and quotient away points that coincide
    afterwards. Returns the rounded data set and the point map."""
    rows = np.round(X.generators, decimals)
    return quotient(X, rows)
