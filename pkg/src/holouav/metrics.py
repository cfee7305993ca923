"""Effective channels, per-user SINR and the sum-rate objective."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet


@dataclass
class BeamformingState:
    """Current optimization variables plus the channel cache for ``q``.

    ``V`` holds one digital beamformer per column (``K x D``); ``sigma2`` is
    the per-user noise power.
    """

    q: np.ndarray
    w: np.ndarray
    phi: np.ndarray
    V: np.ndarray
    sigma2: np.ndarray
    channels: ChannelSet

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        self.w = np.asarray(self.w, dtype=float)
        num_users = self.channels.num_users
        self.sigma2 = np.broadcast_to(np.asarray(self.sigma2, dtype=float), (num_users,)).copy()
        if np.any(self.sigma2 <= 0):
            raise ValueError("noise power must be positive")
        if self.w.shape != (self.phi.shape[0],):
            raise ValueError(f"w has shape {self.w.shape}, expected ({self.phi.shape[0]},)")
        if self.V.shape != (self.phi.shape[1], num_users):
            raise ValueError(f"V has shape {self.V.shape}, expected {(self.phi.shape[1], num_users)}")

    @property
    def W(self) -> np.ndarray:
        return holographic_matrix(self.w, self.phi)

    @property
    def total_power(self) -> float:
        return float(np.sum(np.abs(self.V) ** 2))

    def copy(self) -> "BeamformingState":
        return BeamformingState(
            q=self.q.copy(), w=self.w.copy(), phi=self.phi, V=self.V.copy(),
            sigma2=self.sigma2.copy(), channels=self.channels,
        )


def holographic_matrix(w, phi) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.shape[0] != phi.shape[0]:
        raise ValueError(f"weights of shape {w.shape} do not match phase matrix {phi.shape}")
    return w[:, None] * phi


def signal_matrix(state: BeamformingState) -> np.ndarray:
    """``S[d, k] = h_d^H W v_k``; diagonal is useful signal, off-diagonal is leakage."""
    return (state.channels.vectors.conj() * state.w) @ (state.phi @ state.V)


def sinr_from_signal(S: np.ndarray, sigma2: np.ndarray) -> np.ndarray:
    power = np.abs(S) ** 2
    signal = np.diag(power)
    interference = np.where(np.eye(len(signal), dtype=bool), 0.0, power).sum(axis=1)
    return signal / (interference + sigma2)


def sinrs(state: BeamformingState) -> np.ndarray:
    return sinr_from_signal(signal_matrix(state), state.sigma2)


def sinr(state: BeamformingState, d: int) -> float:
    return float(sinrs(state)[d])


def sum_rate(state: BeamformingState) -> float:
    """Sum of ``log2(1 + SINR_d)`` in bits/s/Hz."""
    return float(np.sum(np.log2(1.0 + sinrs(state))))
