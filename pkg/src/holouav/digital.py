"""Zero-forcing digital precoder with a common total-power scaling."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .channel import ChannelSet
from .errors import RankDeficientError, ZeroBeamformerError

MAX_GRAM_CONDITION = 1e12


def effective_channel(channels: ChannelSet, W: np.ndarray) -> np.ndarray:
    """``D x K`` matrix whose row d is ``h_d^H W``."""
    H = channels.vectors if isinstance(channels, ChannelSet) else np.asarray(channels)
    if H.shape[1] != W.shape[0]:
        raise ValueError(f"channels have {H.shape[1]} elements but W has {W.shape[0]} rows")
    return H.conj() @ W


def zero_forcing(heff: np.ndarray) -> np.ndarray:
    """Right pseudo-inverse ``Heff^H (Heff Heff^H)^-1`` via a Cholesky solve."""
    heff = np.asarray(heff)
    num_users, num_feeds = heff.shape
    if num_users > num_feeds:
        raise RankDeficientError(f"{num_users} users cannot be zero-forced with {num_feeds} RF chains")
    gram = heff @ heff.conj().T
    eig = np.linalg.eigvalsh(gram)
    if not np.all(np.isfinite(eig)) or eig[-1] <= 0 or eig[0] <= eig[-1] / MAX_GRAM_CONDITION:
        raise RankDeficientError(f"effective-channel Gram matrix is singular (eigenvalues {eig})")
    factor = scipy.linalg.cho_factor(gram, lower=True)
    # V^H = Gram^-1 Heff, Gram Hermitian
    return scipy.linalg.cho_solve(factor, heff).conj().T


def normalize_power(V: np.ndarray, p_max: float) -> np.ndarray:
    power = float(np.sum(np.abs(V) ** 2))
    if power == 0.0:
        raise ZeroBeamformerError("cannot normalize an all-zero beamformer")
    return V * np.sqrt(p_max / power)


def zf_beamformer(heff: np.ndarray, p_max: float) -> np.ndarray:
    return normalize_power(zero_forcing(heff), p_max)
