import numpy as np
import pytest

from gyrotrack import scenario


@pytest.fixture(scope="session")
def certified_zero_run():
    """Shared 30 s certified-gain tracking run (zero reference torque)."""
    cfg = scenario.benchmark_config(program="zero", gains="certified",
                                    duration=30.0)
    traj, metrics = scenario.run_closed_loop(cfg)
    return cfg, traj, metrics


@pytest.fixture(scope="session")
def equivalence_runs():
    """Internal vs external closed loops from identical (R0, Omega0), 10 s."""
    cfg = scenario.benchmark_config(program="zero", duration=10.0)
    internal = scenario.run_closed_loop(cfg, actuation="internal")
    external = scenario.run_closed_loop(cfg, actuation="external")
    return cfg, internal, external


def random_rotation(rng, max_angle=np.pi - 0.1):
    from gyrotrack.so3 import expm
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    return expm(rng.uniform(0.0, max_angle) * axis)


def random_spd(rng, low=0.5, high=4.0, distinct=False):
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    eig = rng.uniform(low, high, size=3)
    if distinct:
        eig = np.sort(eig) + np.array([0.0, 0.3, 0.6])
    return q @ np.diag(eig) @ q.T
