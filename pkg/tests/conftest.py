import numpy as np
import pytest

from eocomb.gaussian import CovarianceMatrix


def two_mode_squeezer(r):
    c, s = np.cosh(r), np.sinh(r)
    return np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])


def beam_splitter(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, 0, s, 0], [0, c, 0, s], [-s, 0, c, 0], [0, -s, 0, c]])


def phase_shift(phi1, phi2):
    rot = lambda t: np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
    out = np.zeros((4, 4))
    out[:2, :2], out[2:, 2:] = rot(phi1), rot(phi2)
    return out


def tmsv(r):
    s = two_mode_squeezer(r)
    return CovarianceMatrix(0.5 * s @ s.T)


def random_two_mode_cm(rng):
    """Random physical two-mode CM: thermal state dressed by random symplectic maps."""
    nu = 0.5 + rng.exponential(1.0, 2)
    s = (phase_shift(*rng.uniform(0, 2 * np.pi, 2)) @ two_mode_squeezer(rng.uniform(0, 1.5))
         @ beam_splitter(rng.uniform(0, np.pi)) @ phase_shift(*rng.uniform(0, 2 * np.pi, 2)))
    return CovarianceMatrix(s @ np.diag([nu[0], nu[0], nu[1], nu[1]]) @ s.T), nu


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
