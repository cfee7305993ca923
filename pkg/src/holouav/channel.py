"""Line-of-sight UAV-to-user channels and their derivatives in UAV position."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularGeometryError
from .geometry import Angles, Surface, steering, steering_jacobian

# horizontal distance below which the azimuth derivative is treated as undefined
RHO_EPS = 1e-9


@dataclass(frozen=True)
class ChannelSet:
    """Per-user channel vectors (rows), path-loss amplitudes and link angles."""

    vectors: np.ndarray
    gains: np.ndarray
    angles: tuple

    @property
    def num_users(self) -> int:
        return self.vectors.shape[0]


def _offset(q, u):
    q = np.asarray(q, dtype=float)
    u = np.asarray(u, dtype=float)
    return q - np.array([u[0], u[1], 0.0])


def angles_to_user(q, u) -> Angles:
    """Elevation/azimuth of the UAV at ``q`` seen from ground user ``u``.

    Directly overhead (zero horizontal distance) returns ``(pi/2, 0)``.
    """
    dx, dy, dz = _offset(q, u)
    rho = math.hypot(dx, dy)
    if rho == 0.0:
        if dz == 0.0:
            raise SingularGeometryError(f"UAV at {q!r} coincides with user at {u!r}")
        return Angles(math.pi / 2.0, 0.0)
    return Angles(math.atan(dz / rho), math.atan2(dy, dx))


def channel(q, users, surface: Surface, beta0: float) -> ChannelSet:
    users = np.atleast_2d(np.asarray(users, dtype=float))
    m = surface.num_elements
    vectors = np.empty((len(users), m), dtype=complex)
    gains = np.empty(len(users))
    angs = []
    for d, u in enumerate(users):
        ang = angles_to_user(q, u)
        r = np.linalg.norm(_offset(q, u))
        gains[d] = math.sqrt(beta0) / r
        vectors[d] = gains[d] * steering(ang, surface)
        angs.append(ang)
    return ChannelSet(vectors=vectors, gains=gains, angles=tuple(angs))


def grad_angles(q, u):
    """Gradients of elevation and azimuth with respect to ``q``.

    Returns ``(grad_theta, grad_phi)``, each a length-3 array. Raises
    :class:`SingularGeometryError` when the UAV is (numerically) overhead.
    """
    off = _offset(q, u)
    rho = math.hypot(off[0], off[1])
    if rho < RHO_EPS:
        raise SingularGeometryError(f"azimuth gradient undefined directly above user {u!r}")
    r = float(np.linalg.norm(off))
    theta = math.atan(off[2] / rho)
    phi = math.atan2(off[1], off[0])
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(phi), math.cos(phi)
    g_theta = np.array([-st * cp, -st * sp, ct]) / r
    g_phi = np.array([-sp, cp, 0.0]) / rho
    return g_theta, g_phi


def grad_channel(q, u, surface: Surface, beta0: float) -> np.ndarray:
    """Jacobian of one user's channel vector, shape ``(M, 3)``; column c is dh/dq_c."""
    off = _offset(q, u)
    r = float(np.linalg.norm(off))
    ang = angles_to_user(q, u)
    g_theta, g_phi = grad_angles(q, u)
    amp = math.sqrt(beta0)
    a = steering(ang, surface)
    jac = steering_jacobian(ang, surface)
    pathloss_grad = -amp * off / r**3
    angle_grads = np.vstack([g_theta, g_phi])  # (2, 3)
    return np.outer(a, pathloss_grad) + (amp / r) * (jac @ angle_grads)


def channel_jacobians(q, users, surface: Surface, beta0: float) -> np.ndarray:
    """Stacked :func:`grad_channel` for every user, shape ``(D, M, 3)``."""
    users = np.atleast_2d(np.asarray(users, dtype=float))
    return np.stack([grad_channel(q, u, surface, beta0) for u in users])
