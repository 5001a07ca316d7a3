import numpy as np
import pytest

from circulant_qft import _kernels
from circulant_qft.models import build_four_level
from circulant_qft.schedule import Schedule, SechMaskedPair


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # pay the jit compile cost once, outside any timed assertions
    _kernels.warmup()


@pytest.fixture(scope="session")
def paper_model():
    """Four-level system at the operating point of the fidelity figure:
    V = E(1 + i/3), E = 10/T, T = 1."""
    energy = 10.0
    return build_four_level(energy, energy * (1 + 1j / 3))


@pytest.fixture(scope="session")
def paper_pulses():
    return SechMaskedPair(T=1.0, tau=1.0)


@pytest.fixture()
def paper_schedule(paper_model, paper_pulses):
    h0, h1 = paper_model
    return Schedule(pulses=paper_pulses, h0=h0, h1=h1)


def random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + a.conj().T)


def random_hermitian_circulant_column(rng, n):
    """First column of a random Hermitian circulant (c_k = conj(c_{N-k}))."""
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    c[0] = c[0].real
    for k in range(1, n // 2 + 1):
        c[n - k] = np.conj(c[k])
    if n % 2 == 0:
        c[n // 2] = c[n // 2].real
    return c
