import itertools

import numpy as np
import pytest

from ifnetlab import networks as nw
from ifnetlab.config import RunConfig


@pytest.fixture(scope="session")
def cfg4():
    return RunConfig(grid=4)


@pytest.fixture(scope="session")
def cfg8():
    return RunConfig(grid=8)


@pytest.fixture(scope="session")
def swap_channel():
    return nw.swap_channel()


@pytest.fixture(scope="session")
def parallel_channel():
    return nw.parallel_channel()


def xor_cm_channel(p: float, q: float = None):
    """Y1, Y2 both observe X1 xor X2 through (possibly different) BSCs,
    on the common-message two-user topology."""
    q = p if q is None else q
    topo = nw.cic_cm_topology()
    f1 = np.asarray([[1 - p, p], [p, 1 - p]])
    f2 = np.asarray([[1 - q, q], [q, 1 - q]])
    y1 = nw.noisy_receiver((2, 2), lambda a, b: a ^ b, 2, f1)
    y2 = nw.noisy_receiver((2, 2), lambda a, b: a ^ b, 2, f2)
    return nw.channel_from_conditionals(topo, (2, 2), [y1, y2])


def swap_cm_channel(p1: float, p2: float):
    """Y1 = BSC(X2), Y2 = BSC(X1) on the common-message topology."""
    topo = nw.cic_cm_topology()
    f1 = np.asarray([[1 - p1, p1], [p1, 1 - p1]])
    f2 = np.asarray([[1 - p2, p2], [p2, 1 - p2]])
    y1 = nw.noisy_receiver((2, 2), lambda a, b: b, 2, f1)
    y2 = nw.noisy_receiver((2, 2), lambda a, b: a, 2, f2)
    return nw.channel_from_conditionals(topo, (2, 2), [y1, y2])


def random_strong_channel(rng: np.random.Generator):
    """Cross-observation channel with random private DMCs: structurally in
    the strong regime (each receiver sees the interferer cleanly)."""
    return nw.cross_observation_random(rng)
