import math

import numpy as np
import pytest

from wsntrack.channel import ChannelParams
from wsntrack.localization import (
    DegenerateGeometryError,
    InsufficientCoverageError,
    localize_target,
    trilaterate,
)
from wsntrack.mobility import TargetState
from wsntrack.topology import topology_from_positions

REFS = [(0.0, 0.0), (10.0, 0.0), (0.0, 10.0)]


def grid_search(refs, dists, step=0.1, width=75.0, height=65.0):
    """Brute-force minimiser of squared range residuals over the field."""
    xs = np.arange(0.0, width + step / 2, step)
    ys = np.arange(0.0, height + step / 2, step)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    cost = np.zeros_like(X)
    for (rx, ry), d in zip(refs, dists):
        cost += (np.hypot(X - rx, Y - ry) - d) ** 2
    i, j = np.unravel_index(np.argmin(cost), cost.shape)
    return xs[i], ys[j]


def test_target_at_reference():
    assert trilaterate(REFS, [0, 10, 10]) == pytest.approx((0, 0), abs=1e-9)


def test_exact_recovery():
    est = trilaterate(REFS, [5, math.sqrt(65), math.sqrt(45)])
    assert math.dist(est, (3, 4)) < 1e-6


def test_too_few_references():
    with pytest.raises(InsufficientCoverageError):
        trilaterate(REFS[:2], [1, 1])


def test_collinear_references():
    with pytest.raises(DegenerateGeometryError):
        trilaterate([(0, 0), (5, 0), (10, 0)], [1, 4, 9])


def test_grid_oracle_on_noisy_ranges():
    rng = np.random.default_rng(7)
    refs = [(20.0, 20.0), (35.0, 20.0), (20.0, 35.0), (35.0, 35.0)]
    truth = (26.0, 29.0)
    dists = [math.dist(truth, r) * 10 ** (rng.normal(0, 2) / 24) for r in refs]
    est = trilaterate(refs, dists, bounds=((0, 0), (75, 65)))
    assert math.dist(est, grid_search(refs, dists)) <= 0.2


def _single_target(refs, target, rng_m=16.0):
    topo = topology_from_positions((0, 0), refs, [target], radio_range_m=rng_m)
    tid = topo.targets[0]
    return topo, TargetState(tid, tuple(target), tuple(target), 0.0)


def test_uncovered_target_fails():
    topo, st = _single_target([(5, 0)], (60, 60))
    assert localize_target(st, topo, ChannelParams()) is None
    assert st.estimated_position is None and st.covering_references == []


def test_two_references_fail():
    topo, st = _single_target([(5, 0), (5, 10)], (10, 5))
    exchanged = []
    assert localize_target(st, topo, ChannelParams(), exchange=lambda r: exchanged.append(r) or True) is None
    assert exchanged == [1, 2]


def test_four_references_noiseless():
    refs = [(8, 0), (8, 12), (20, 0), (20, 12)]
    topo, st = _single_target(refs, (13.3, 5.1))
    est = localize_target(st, topo, ChannelParams())
    assert math.dist(est, (13.3, 5.1)) < 1e-6
    assert st.estimated_position == est and st.covering_references == [1, 2, 3, 4]


def test_lost_exchange_drops_sample():
    refs = [(8, 0), (8, 12), (20, 0)]
    topo, st = _single_target(refs, (13.0, 5.0))
    assert localize_target(st, topo, ChannelParams(), exchange=lambda r: r != 2) is None
