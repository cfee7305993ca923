"""Holographic amplitude optimization by projected gradient ascent.

With ``W = diag(w) Phi`` every received term is linear in the weights:
``h_d^H W v_k = sum_m w_m conj(h_{d,m}) (Phi v_k)_m``. The gradient below is
built from those per-element terms and the quotient rule on each SINR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .metrics import BeamformingState, sinr_from_signal

INV_LN2 = 1.0 / math.log(2.0)
# slack allowed on a guarded ascent step
ASCENT_SLACK = 1e-12


@dataclass
class HoloGradientWorkspace:
    """Per-element decomposition of the received signal.

    ``per_element_interf[d, k, m] = conj(h_{d,m}) (Phi v_k)_m`` (its ``k = d``
    slice is ``per_element_signal``), ``u_cross[d, k]`` is the weighted sum of
    that over ``m`` and ``u`` is the diagonal of ``u_cross``.
    """

    u: np.ndarray
    u_cross: np.ndarray
    per_element_signal: np.ndarray
    per_element_interf: np.ndarray


@dataclass(frozen=True)
class HoloOptConfig:
    eta: float = 0.01
    epsilon: float = 1e-5
    max_iters: int = 500
    monotone_guard: bool = True
    max_backtracks: int = 20
    # optional second stopping rule on ||w(t+1) - w(t)||
    weight_tol: float | None = None

    def __post_init__(self):
        if not (self.eta > 0 and self.epsilon > 0):
            raise ValueError("eta and epsilon must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


class HoloResult(NamedTuple):
    w: np.ndarray
    iterations: int
    trace: list
    guard_events: int


def decompose(state: BeamformingState) -> HoloGradientWorkspace:
    hc = state.channels.vectors.conj()  # (D, M)
    B = state.phi @ state.V  # (M, D)
    terms = hc[:, None, :] * B.T[None, :, :]  # (D, D, M)
    u_cross = terms @ state.w
    idx = np.arange(hc.shape[0])
    return HoloGradientWorkspace(
        u=u_cross[idx, idx].copy(),
        u_cross=u_cross,
        per_element_signal=terms[idx, idx, :].copy(),
        per_element_interf=terms,
    )


def sinr_from_workspace(ws: HoloGradientWorkspace, sigma2) -> np.ndarray:
    num = np.abs(ws.u) ** 2
    leak = np.abs(ws.u_cross) ** 2
    np.fill_diagonal(leak, 0.0)
    return num / (leak.sum(axis=1) + sigma2)


def rate_coefficients(S: np.ndarray, sigma2: np.ndarray) -> np.ndarray:
    """Matrix ``C`` with ``dR = (2/ln2) Re sum_{d,k} C[d,k] dS[d,k]``.

    ``C[d,d] = conj(S_dd) / (D_d (1 + SINR_d))`` and, off the diagonal,
    ``C[d,k] = -SINR_d conj(S_dk) / (D_d (1 + SINR_d))`` where ``D_d`` is the
    interference-plus-noise of user d. Shared by the weight and position
    gradients.
    """
    power = np.abs(S) ** 2
    eye = np.eye(S.shape[0], dtype=bool)
    denom = np.where(eye, 0.0, power).sum(axis=1) + sigma2
    snr = np.diag(power) / denom
    scale = 1.0 / (denom * (1.0 + snr))
    alpha = np.where(eye, 1.0, -snr[:, None]) * scale[:, None]
    return alpha * S.conj()


class _WeightObjective:
    """Sum rate and gradient as functions of ``w`` with ``q`` and ``V`` frozen."""

    def __init__(self, state: BeamformingState):
        self.hc = state.channels.vectors.conj()
        self.B = state.phi @ state.V
        self.sigma2 = state.sigma2

    def signal(self, w):
        return (self.hc * w) @ self.B

    def rate(self, w) -> float:
        return float(np.sum(np.log2(1.0 + sinr_from_signal(self.signal(w), self.sigma2))))

    def grad(self, w) -> np.ndarray:
        C = rate_coefficients(self.signal(w), self.sigma2)
        # sum_{d,k} C[d,k] conj(h_{d,m}) B[m,k]
        return 2.0 * INV_LN2 * np.real(np.sum(self.hc.T * (self.B @ C.T), axis=1))


def grad_weights(state: BeamformingState) -> np.ndarray:
    """``dR/dw_m`` for every element, length ``M``."""
    return _WeightObjective(state).grad(state.w)


def project_weights(w) -> np.ndarray:
    return np.clip(w, 0.0, 1.0)


def optimize_weights(state: BeamformingState, cfg: HoloOptConfig = HoloOptConfig()) -> HoloResult:
    """Projected gradient ascent on the amplitudes with ``q`` and ``V`` fixed.

    Stops when ``|R(t+1) - R(t)| < epsilon`` (or the optional weight-change
    rule fires) or after ``max_iters`` updates. With the guard on, a step that
    lowers the rate is halved up to ``max_backtracks`` times; if none is
    accepted the loop ends at the current point.
    """
    obj = _WeightObjective(state)
    w = project_weights(state.w)
    rate = obj.rate(w)
    trace = [rate]
    guard_events = 0
    it = 0
    for it in range(1, cfg.max_iters + 1):
        g = obj.grad(w)
        step = cfg.eta
        w_new = project_weights(w + step * g)
        rate_new = obj.rate(w_new)
        if cfg.monotone_guard and rate_new < rate - ASCENT_SLACK:
            guard_events += 1
            for _ in range(cfg.max_backtracks):
                step *= 0.5
                w_new = project_weights(w + step * g)
                rate_new = obj.rate(w_new)
                if rate_new >= rate - ASCENT_SLACK:
                    break
            else:
                break
        delta_rate = abs(rate_new - rate)
        delta_w = float(np.linalg.norm(w_new - w))
        w, rate = w_new, rate_new
        trace.append(rate)
        if delta_rate < cfg.epsilon:
            break
        if cfg.weight_tol is not None and delta_w < cfg.weight_tol:
            break
    return HoloResult(w=w, iterations=it, trace=trace, guard_events=guard_events)
