import numpy as np
import pytest

from entdist.oracles import bell_state


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def psi_plus():
    return bell_state("psi+")


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def w_state() -> np.ndarray:
    return (ket("100") + ket("010") + ket("001")) / np.sqrt(3)


def ghz3() -> np.ndarray:
    return (ket("000") + ket("111")) / np.sqrt(2)
