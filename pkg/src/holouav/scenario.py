"""Experiment description and the seeded user placement."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import SurfaceConfig
from .position import Region


@dataclass(frozen=True)
class Scenario:
    """One simulated deployment.

    ``users`` pins an explicit layout; when it is ``None`` the users are drawn
    uniformly over ``user_area`` = ``(x_min, x_max, y_min, y_max)`` from the
    stream keyed by ``(seed, realization)``. Noise power follows from the
    transmit SNR, ``sigma2 = p_max / 10**(snr_db / 10)``.
    """

    num_users: int = 2
    user_area: tuple = (0.0, 100.0, 0.0, 100.0)
    surface: SurfaceConfig = field(default_factory=SurfaceConfig)
    q0: tuple = (50.0, 50.0, 40.0)
    region: Region = field(default_factory=Region)
    p_max: float = 1.0
    snr_db: float = 30.0
    beta0: float = 1.0
    seed: int = 0
    realization: int = 0
    users: tuple | None = None

    def __post_init__(self):
        if self.num_users < 1:
            raise ValueError("need at least one user")
        if self.surface.num_feeds < self.num_users:
            raise ValueError(
                f"{self.num_users} users need at least as many RF chains, got {self.surface.num_feeds}")
        if not np.isfinite(self.snr_db):
            raise ValueError("snr_db must be finite")
        if self.p_max < 0:
            raise ValueError("p_max must be non-negative")
        if self.users is not None and np.shape(self.users) != (self.num_users, 2):
            raise ValueError(f"explicit users must have shape ({self.num_users}, 2)")

    @property
    def num_rf(self) -> int:
        return self.surface.num_feeds

    @property
    def num_elements(self) -> int:
        return self.surface.num_elements

    @property
    def sigma2(self) -> float:
        # P_max = 0 would zero the noise too; keep the 1 W reference in that case
        ref = self.p_max if self.p_max > 0 else 1.0
        return ref / 10.0 ** (self.snr_db / 10.0)


def user_rng(seed: int, realization: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(realization), 0])


def weight_rng(seed: int, realization: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(realization), 1])


def place_users(scenario: Scenario, realization: int | None = None) -> np.ndarray:
    """``(D, 2)`` user positions; deterministic in ``(scenario.seed, realization)``."""
    if scenario.users is not None:
        return np.asarray(scenario.users, dtype=float)
    if realization is None:
        realization = scenario.realization
    x0, x1, y0, y1 = scenario.user_area
    rng = user_rng(scenario.seed, realization)
    xy = rng.uniform(size=(scenario.num_users, 2))
    return np.column_stack([x0 + (x1 - x0) * xy[:, 0], y0 + (y1 - y0) * xy[:, 1]])
