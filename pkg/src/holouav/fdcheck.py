"""Central finite-difference gradients for checking the analytic derivatives."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OracleError

#: default probe for positions in metres
POSITION_STEP = 1e-5


@dataclass(frozen=True)
class FdConfig:
    step: float = 1e-6
    scheme: str = "central"

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("finite-difference step must be positive")
        if self.scheme != "central":
            raise ValueError(f"unsupported scheme {self.scheme!r}")


def fd_grad(f, x, cfg: FdConfig = FdConfig()) -> np.ndarray:
    """Gradient of scalar ``f`` at ``x``, ``(f(x + h e_i) - f(x - h e_i)) / 2h`` per component."""
    x = np.asarray(x, dtype=float)
    h = cfg.step
    grad = np.empty(x.size)
    flat = x.ravel()
    for i in range(flat.size):
        xp = flat.copy()
        xm = flat.copy()
        xp[i] += h
        xm[i] -= h
        fp = f(xp.reshape(x.shape))
        fm = f(xm.reshape(x.shape))
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise OracleError(f"non-finite value probing component {i}: f+={fp}, f-={fm}")
        grad[i] = (fp - fm) / (2.0 * h)
    return grad.reshape(x.shape)


def fd_jacobian(f, x, cfg: FdConfig = FdConfig()) -> np.ndarray:
    """Central differences of an array-valued (possibly complex) ``f``; last axis indexes ``x``."""
    x = np.asarray(x, dtype=float)
    h = cfg.step
    cols = []
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = h
        fp = np.asarray(f(x + e))
        fm = np.asarray(f(x - e))
        if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
            raise OracleError(f"non-finite value probing component {i}")
        cols.append((fp - fm) / (2.0 * h))
    return np.stack(cols, axis=-1)
