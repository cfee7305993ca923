import numpy as np
import pytest

from holouav.channel import channel
from holouav.geometry import SurfaceConfig, build_surface, phase_matrix
from holouav.metrics import BeamformingState


def rel_err(analytic, reference, floor=1e-12):
    """Entrywise relative error; entries whose reference is below ``floor`` are compared absolutely."""
    analytic = np.asarray(analytic)
    reference = np.asarray(reference)
    diff = np.abs(analytic - reference)
    mag = np.abs(reference)
    return np.where(mag < floor, diff, diff / np.maximum(mag, floor))


def random_instance(rng, m_side=4, num_feeds=3, num_users=2, snr_db=30.0, p_max=1.0):
    """Random feasible state: users in [0,100]^2, q inside the default box, w in (0.05, 0.95)."""
    surface = build_surface(SurfaceConfig(m_x=m_side, m_y=m_side, num_feeds=num_feeds))
    phi = phase_matrix(surface)
    users = rng.uniform(0, 100, size=(num_users, 2))
    q = np.array([*rng.uniform(0, 100, 2), rng.uniform(10, 50)])
    w = rng.uniform(0.05, 0.95, surface.num_elements)
    V = rng.standard_normal((num_feeds, num_users)) + 1j * rng.standard_normal((num_feeds, num_users))
    V *= np.sqrt(p_max / np.sum(np.abs(V) ** 2))
    sigma2 = p_max / 10 ** (snr_db / 10)
    state = BeamformingState(q=q, w=w, phi=phi, V=V, sigma2=sigma2,
                             channels=channel(q, users, surface, 1.0))
    return state, users, surface


@pytest.fixture
def rng():
    return np.random.default_rng(20241014)


# criterion number -> (passed, detail); filled by test_acceptance, echoed at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
