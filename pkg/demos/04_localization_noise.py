"""
Trilateration under RSS noise
=============================

Each target turns received signal strength into ranges and solves for its
position. Without noise the answer is exact. Shadowing noise in dB becomes a
multiplicative range error.
"""

import math
import statistics

import numpy as np

from wsntrack.channel import ChannelParams, distance_from_rss, rss_at_distance
from wsntrack.localization import trilaterate

refs = np.array([(20.0, 20.0), (32.0, 20.0), (20.0, 32.0), (32.0, 32.0)])
truth = (24.0, 27.5)
rng = np.random.default_rng(1)

for sigma in (0.0, 1.0, 2.0, 4.0):
    p = ChannelParams(noise_sigma_db=sigma)
    errors = []
    for _ in range(500):
        rss = [rss_at_distance(math.dist(truth, r), p, rng.standard_normal() if sigma else None) for r in refs]
        est = trilaterate(refs, [distance_from_rss(v, p) for v in rss], bounds=((0, 0), (75, 65)))
        errors.append(math.dist(est, truth))
    print(f"sigma {sigma:>3} dB   median error {statistics.median(errors):8.4f} m   p90 {np.quantile(errors, 0.9):8.4f} m")
