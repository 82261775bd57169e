"""Log-distance path-loss channel: RSS from geometry and its inverse."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import SimConfig


@dataclass(frozen=True)
class ChannelParams:
    rss_ref_dbm: float = -40.0
    ref_distance_m: float = 1.0
    path_loss_exponent: float = 2.4
    noise_sigma_db: float = 0.0
    radio_range_m: float = 16.0

    def __post_init__(self):
        if not self.path_loss_exponent > 0:
            raise ValueError("path_loss_exponent must be > 0")
        if not self.ref_distance_m > 0:
            raise ValueError("ref_distance_m must be > 0")
        if self.noise_sigma_db < 0:
            raise ValueError("noise_sigma_db must be >= 0")

    @classmethod
    def from_config(cls, cfg: SimConfig) -> "ChannelParams":
        return cls(
            rss_ref_dbm=cfg.rss_ref_dbm,
            ref_distance_m=cfg.ref_distance_m,
            path_loss_exponent=cfg.path_loss_exponent,
            noise_sigma_db=cfg.noise_sigma_db,
            radio_range_m=cfg.radio_range_m,
        )


def rss_at_distance(d: float, params: ChannelParams, noise_draw: float | None = None) -> float:
    """Received power in dBm at distance ``d`` metres.

    ``noise_draw`` is a standard-normal sample scaled by ``noise_sigma_db``;
    omit it for the noiseless value.
    """
    if not d > 0:
        raise ValueError(f"distance must be > 0, got {d}")
    rss = params.rss_ref_dbm - 10.0 * params.path_loss_exponent * math.log10(d / params.ref_distance_m)
    if noise_draw is not None:
        rss += params.noise_sigma_db * noise_draw
    return rss


def distance_from_rss(rss: float, params: ChannelParams) -> float:
    if not math.isfinite(rss):
        raise ValueError(f"rss must be finite, got {rss}")
    return params.ref_distance_m * 10.0 ** ((params.rss_ref_dbm - rss) / (10.0 * params.path_loss_exponent))


def in_range(pos_a, pos_b, params: ChannelParams) -> bool:
    # boundary inclusive
    return math.dist(pos_a, pos_b) <= params.radio_range_m
