"""RHS element/feed layout, fixed reference-wave phases and the UPA response.

Elements are indexed row-major, ``m = i_y * m_x + i_x``, so that the planar
response factors as ``a_y kron a_x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

#: Free-space wavenumber at the default 30 GHz carrier (lambda = 1 cm).
K_FREE = 200.0 * math.pi
#: In-surface wavenumber for a substrate with relative permittivity 3.
K_SURFACE = math.sqrt(3.0) * K_FREE
WAVELENGTH = 2.0 * math.pi / K_FREE


class Angles(NamedTuple):
    """Elevation ``theta`` in [0, pi/2] and azimuth ``phi`` in (-pi, pi]."""

    theta: float
    phi: float


@dataclass(frozen=True)
class SurfaceConfig:
    m_x: int = 8
    m_y: int = 8
    d_x: float = WAVELENGTH / 3.0
    d_y: float = WAVELENGTH / 3.0
    k_f: float = K_FREE
    k_s: float = K_SURFACE
    num_feeds: int = 6

    def __post_init__(self):
        if int(self.m_x) < 1 or int(self.m_y) < 1:
            raise ValueError(f"element grid must be at least 1x1, got {self.m_x}x{self.m_y}")
        if not (self.d_x > 0 and self.d_y > 0):
            raise ValueError("element spacing must be positive")
        if not (self.k_f > 0 and self.k_s > 0):
            raise ValueError("wavenumbers must be positive")
        if int(self.num_feeds) < 1:
            raise ValueError("need at least one feed")

    @property
    def num_elements(self) -> int:
        return self.m_x * self.m_y


@dataclass(frozen=True)
class Surface:
    config: SurfaceConfig
    element_positions: np.ndarray = field(repr=False)
    feed_positions: np.ndarray = field(repr=False)

    @property
    def num_elements(self) -> int:
        return self.config.num_elements

    @property
    def num_feeds(self) -> int:
        return self.config.num_feeds


def build_surface(config: SurfaceConfig) -> Surface:
    """Lay out the element grid and place the feeds along the ``y = 0`` edge.

    Feeds are spread uniformly over ``[0, (m_x - 1) d_x]``; a single feed sits
    at the midpoint of that edge.
    """
    ix = np.arange(config.m_x)
    iy = np.arange(config.m_y)
    gx, gy = np.meshgrid(ix * config.d_x, iy * config.d_y, indexing="xy")
    elements = np.column_stack([gx.ravel(), gy.ravel()])

    span = (config.m_x - 1) * config.d_x
    if config.num_feeds == 1:
        fx = np.array([span / 2.0])
    else:
        fx = np.linspace(0.0, span, config.num_feeds)
    feeds = np.column_stack([fx, np.zeros_like(fx)])

    elements.setflags(write=False)
    feeds.setflags(write=False)
    return Surface(config=config, element_positions=elements, feed_positions=feeds)


def phase_matrix(surface: Surface) -> np.ndarray:
    """Unit-modulus ``M x K`` matrix ``exp(-j k_s |r_m - f_k|)``."""
    diff = surface.element_positions[:, None, :] - surface.feed_positions[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    return np.exp(-1j * surface.config.k_s * dist)


def _direction_cosine(angles: Angles, axis: str) -> float:
    s = math.sin(angles.theta)
    if axis == "x":
        return s * math.cos(angles.phi)
    if axis == "y":
        return s * math.sin(angles.phi)
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def steering_axis(angles: Angles, n: int, spacing: float, k_f: float, axis: str) -> np.ndarray:
    psi = _direction_cosine(angles, axis)
    return np.exp(1j * np.arange(n) * (k_f * spacing * psi))


def _axis_factors(angles: Angles, surface: Surface):
    c = surface.config
    ax = steering_axis(angles, c.m_x, c.d_x, c.k_f, "x")
    ay = steering_axis(angles, c.m_y, c.d_y, c.k_f, "y")
    return ax, ay


def steering(angles: Angles, surface: Surface) -> np.ndarray:
    ax, ay = _axis_factors(angles, surface)
    return np.kron(ay, ax)


def steering_jacobian(angles: Angles, surface: Surface) -> np.ndarray:
    """Columns ``[da/dtheta, da/dphi]`` of the planar response, shape ``(M, 2)``.

    Built from the axis derivatives with the Kronecker product rule.
    """
    c = surface.config
    ax, ay = _axis_factors(angles, surface)
    st, ct = math.sin(angles.theta), math.cos(angles.theta)
    sp, cp = math.sin(angles.phi), math.cos(angles.phi)
    px = 1j * c.k_f * c.d_x * np.arange(c.m_x) * ax
    py = 1j * c.k_f * c.d_y * np.arange(c.m_y) * ay

    dax_dt, dax_dp = ct * cp * px, -st * sp * px
    day_dt, day_dp = ct * sp * py, st * cp * py

    jac = np.empty((c.num_elements, 2), dtype=complex)
    jac[:, 0] = np.kron(ay, dax_dt) + np.kron(day_dt, ax)
    jac[:, 1] = np.kron(ay, dax_dp) + np.kron(day_dp, ax)
    return jac
