import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_image(gen, h=16, w=16, c=3):
    return gen.random((h, w, c)).astype(np.float32)


def ramp_image(h=16, w=16, c=3):
    rr = np.linspace(0.0, 1.0, h)[:, None, None]
    cc = np.linspace(0.0, 1.0, w)[None, :, None]
    ch = np.linspace(0.2, 0.8, c)[None, None, :]
    return ((rr + cc) / 2.0 * ch).astype(np.float32)
