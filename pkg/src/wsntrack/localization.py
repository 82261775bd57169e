"""RSS-based self-localization by least-squares multilateration."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy.optimize import least_squares

from .channel import ChannelParams, distance_from_rss, rss_at_distance
from .mobility import TargetState
from .topology import NetworkTopology, NodeRole

# smallest singular value of the linearised system below which the
# reference geometry is treated as collinear
DEGENERACY_TOL = 1e-9
_MIN_DISTANCE_M = 1e-9


class LocalizationError(ValueError):
    pass


class InsufficientCoverageError(LocalizationError):
    pass


class DegenerateGeometryError(LocalizationError):
    pass


def _linear_solve(refs: np.ndarray, dists: np.ndarray) -> np.ndarray:
    # subtract the first circle equation from the others
    A = 2.0 * (refs[1:] - refs[0])
    b = dists[0] ** 2 - dists[1:] ** 2 + (refs[1:] ** 2).sum(axis=1) - (refs[0] ** 2).sum()
    s = np.linalg.svd(A, compute_uv=False)
    if s.size < 2 or s[-1] < DEGENERACY_TOL:
        raise DegenerateGeometryError("reference nodes are collinear")
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    return sol


def trilaterate(ref_positions, distances, bounds=None) -> tuple[float, float]:
    """Estimate a 2-d position from three or more reference distances.

    A linear least-squares solve of the difference-of-circles system gives
    the starting point, which is then refined by minimising the squared range
    residuals. With exact distances the linear step is already the answer.
    ``bounds`` (``((xmin, ymin), (xmax, ymax))``) confines the refined estimate.
    """
    refs = np.asarray(ref_positions, dtype=float).reshape(-1, 2)
    dists = np.asarray(distances, dtype=float).ravel()
    if len(refs) != len(dists):
        raise ValueError("need one distance per reference")
    if len(refs) < 3:
        raise InsufficientCoverageError(f"need at least 3 references, got {len(refs)}")

    x0 = _linear_solve(refs, dists)
    if bounds is not None:
        lo = np.asarray(bounds[0], dtype=float)
        hi = np.asarray(bounds[1], dtype=float)
        x0 = np.clip(x0, lo, hi)

    def residuals(p):
        return np.hypot(*(p - refs).T) - dists

    scale = max(1.0, float(dists.max()))
    if np.max(np.abs(residuals(x0))) <= 1e-10 * scale:
        return float(x0[0]), float(x0[1])

    def jac(p):
        delta = p - refs
        norm = np.maximum(np.hypot(*delta.T), _MIN_DISTANCE_M)
        return delta / norm[:, None]

    kwargs = {}
    if bounds is not None:
        kwargs["bounds"] = (lo, hi)
    fit = least_squares(residuals, x0, jac=jac, xtol=1e-12, ftol=1e-12, gtol=1e-12, **kwargs)
    return float(fit.x[0]), float(fit.x[1])


def covering_references(target_id: int, topology: NetworkTopology) -> list[int]:
    """Reachable references within radio range of a target, in id order."""
    return sorted(
        n for n in topology.adjacency[target_id] if topology.roles[n] is NodeRole.REFERENCE and topology.reachable(n)
    )


def localize_target(
    target: TargetState,
    topology: NetworkTopology,
    channel: ChannelParams,
    rng: np.random.Generator | None = None,
    bounds=None,
    exchange: Callable[[int], bool] | None = None,
) -> tuple[float, float] | None:
    """Run one round of self-localization for ``target``.

    Every covering reference contributes one RSS sample. ``exchange(ref_id)``
    is called per reference so the caller can account for the local message;
    if it returns False the sample is lost. Returns the estimate (also stored
    on ``target``) or None when fewer than three usable samples remain.
    """
    refs = covering_references(target.id, topology)
    target.covering_references = refs
    target.estimated_position = None

    heard = []
    rss = []
    for ref in refs:
        if exchange is not None and not exchange(ref):
            continue
        d = max(math.dist(target.true_position, topology.positions[ref]), _MIN_DISTANCE_M)
        noise = rng.standard_normal() if (rng is not None and channel.noise_sigma_db > 0) else None
        heard.append(ref)
        rss.append(rss_at_distance(d, channel, noise))

    if len(heard) < 3:
        return None
    dists = [distance_from_rss(v, channel) for v in rss]
    try:
        est = trilaterate(topology.positions[heard], dists, bounds=bounds)
    except DegenerateGeometryError:
        return None
    target.estimated_position = est
    return est
