"""Sum-rate gradient in UAV position, feasible-region projection and the position step."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import channel_jacobians
from .geometry import Surface
from .holographic import INV_LN2, rate_coefficients
from .metrics import BeamformingState, signal_matrix


@dataclass(frozen=True)
class Region:
    """Allowed UAV region: a rectangle or disk in the xy-plane times an altitude band."""

    kind: str = "rectangle"
    x_min: float = 0.0
    x_max: float = 100.0
    y_min: float = 0.0
    y_max: float = 100.0
    center: tuple = (50.0, 50.0)
    radius: float = 50.0
    z_min: float = 10.0
    z_max: float = 50.0

    def __post_init__(self):
        if self.kind not in ("rectangle", "circle"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.z_min > self.z_max:
            raise ValueError("z_min must not exceed z_max")
        if self.kind == "rectangle" and (self.x_min > self.x_max or self.y_min > self.y_max):
            raise ValueError("rectangle bounds are not ordered")
        if self.kind == "circle" and not self.radius > 0:
            raise ValueError("circle radius must be positive")

    def contains(self, q, tol: float = 1e-9) -> bool:
        q = np.asarray(q, dtype=float)
        if not (self.z_min - tol <= q[2] <= self.z_max + tol):
            return False
        if self.kind == "rectangle":
            return (self.x_min - tol <= q[0] <= self.x_max + tol
                    and self.y_min - tol <= q[1] <= self.y_max + tol)
        return float(np.hypot(q[0] - self.center[0], q[1] - self.center[1])) <= self.radius + tol


@dataclass(frozen=True)
class PositionOptConfig:
    mu_q: float = 2.0
    normalize_gradient: bool = True
    # halvings tried by the driver's position guard before the step is dropped
    max_backtracks: int = 6

    def __post_init__(self):
        if not self.mu_q > 0:
            raise ValueError("mu_q must be positive")


def grad_position(state: BeamformingState, users, surface: Surface, beta0: float) -> np.ndarray:
    """Exact gradient of the sum rate with respect to ``q`` (length 3).

    Beamformers are held fixed; only the channels move with the UAV, through
    both the path loss and the steering angles.
    """
    S = signal_matrix(state)
    C = rate_coefficients(S, state.sigma2)
    if not np.any(C):
        return np.zeros(3)
    jac = channel_jacobians(state.q, users, surface, beta0)  # (D, M, 3)
    WV = (state.w[:, None] * state.phi) @ state.V  # (M, D)
    dS = np.einsum("dmc,mk->dkc", jac.conj(), WV)
    return 2.0 * INV_LN2 * np.real(np.einsum("dk,dkc->c", C, dS))


def project_position(q, region: Region) -> np.ndarray:
    q = np.array(q, dtype=float)
    q[2] = min(max(q[2], region.z_min), region.z_max)
    if region.kind == "rectangle":
        q[0] = min(max(q[0], region.x_min), region.x_max)
        q[1] = min(max(q[1], region.y_min), region.y_max)
    else:
        c = np.asarray(region.center, dtype=float)
        off = q[:2] - c
        dist = float(np.hypot(off[0], off[1]))
        if dist > region.radius:
            q[:2] = c + region.radius * off / dist
    return q


def step_position(q, grad, cfg: PositionOptConfig, region: Region, mu_q: float | None = None) -> np.ndarray:
    """One projected ascent step; with normalization the raw move is exactly ``mu_q`` metres."""
    q = np.asarray(q, dtype=float)
    grad = np.asarray(grad, dtype=float)
    mu = cfg.mu_q if mu_q is None else mu_q
    if cfg.normalize_gradient:
        norm = float(np.linalg.norm(grad))
        direction = grad / norm if norm > 0 else np.zeros(3)
    else:
        direction = grad
    return project_position(q + mu * direction, region)
