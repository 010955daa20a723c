"""Validated qubit states, Pauli operators and the Hilbert-Schmidt distance.

Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of the
computational-basis index: ``|q0 q1 ... q_{M-1}>``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
NORM_TOL = 1e-12
IMAG_TOL = 1e-8

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])
PAULIS.setflags(write=False)


class StateError(ValueError):
    """Base class for rejected state data."""


class BadDimension(StateError):
    pass


class NotHermitian(StateError):
    pass


class TraceNotOne(StateError):
    pass


class NotPSD(StateError):
    pass


class NotNormalized(StateError):
    pass


class ImaginaryExpectation(StateError):
    pass


class PauliAxis(enum.IntEnum):
    X = 1
    Y = 2
    Z = 3

    @property
    def matrix(self) -> np.ndarray:
        return PAULIS[self.value - 1]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def num_qubits_for(dim: int) -> int:
    """Return ``M`` with ``2**M == dim`` or raise :class:`BadDimension`."""
    if dim < 2 or dim & (dim - 1):
        raise BadDimension(f"dimension {dim} is not a power of 2 (>= 2)")
    return dim.bit_length() - 1


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector on ``num_qubits`` qubits."""

    num_qubits: int
    amplitudes: np.ndarray

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> DensityMatrix:
        return make_density(self.projector())


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite ``2^M x 2^M`` matrix."""

    num_qubits: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def make_pure(amplitudes) -> PureState:
    psi = np.asarray(amplitudes, dtype=complex)
    if psi.ndim != 1:
        raise BadDimension(f"amplitudes must be a vector, got shape {psi.shape}")
    m = num_qubits_for(psi.shape[0])
    dev = abs(np.linalg.norm(psi) - 1.0)
    if dev > NORM_TOL:
        raise NotNormalized(f"norm deviates from 1 by {dev:.3e}")
    return PureState(m, _frozen(psi))


def normalized(amplitudes) -> PureState:
    psi = np.asarray(amplitudes, dtype=complex)
    return make_pure(psi / np.linalg.norm(psi))


def make_density(entries) -> DensityMatrix:
    """Validate ``entries`` as a density matrix.

    Raises one of :class:`BadDimension`, :class:`NotHermitian`,
    :class:`TraceNotOne`, :class:`NotPSD`; the message carries the size of
    the violation. Nothing is repaired: small negative eigenvalues inside
    ``PSD_TOL`` are accepted as they are.
    """
    rho = np.asarray(entries, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise BadDimension(f"expected a square matrix, got shape {rho.shape}")
    m = num_qubits_for(rho.shape[0])
    asym = float(np.max(np.abs(rho - rho.conj().T)))
    if asym >= HERMITIAN_TOL:
        raise NotHermitian(f"max |rho_ij - conj(rho_ji)| = {asym:.3e}")
    tr = np.trace(rho)
    dev = abs(tr - 1.0)
    if dev > TRACE_TOL:
        raise TraceNotOne(f"trace = {tr.real:.12g}, deviation {dev:.3e}")
    lmin = float(np.linalg.eigvalsh(rho)[0])
    if lmin < -PSD_TOL:
        raise NotPSD(f"minimum eigenvalue {lmin:.3e}")
    return DensityMatrix(m, _frozen(rho))


def as_density(state) -> DensityMatrix:
    """Coerce a :class:`PureState`, :class:`DensityMatrix` or raw matrix."""
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return state.density()
    return make_density(state)


@lru_cache(maxsize=None)
def _pauli_on_qubit(m: int, mu: int, axis: int) -> np.ndarray:
    op = np.kron(np.kron(np.eye(2**mu), PAULIS[axis - 1]), np.eye(2 ** (m - mu - 1)))
    op.setflags(write=False)
    return op


def pauli_on_qubit(m: int, mu: int, axis: PauliAxis | int) -> np.ndarray:
    """``I x ... x sigma_axis x ... x I`` with the Pauli matrix in slot ``mu``."""
    if not 0 <= mu < m:
        raise IndexError(f"qubit index {mu} out of range for {m} qubits")
    return _pauli_on_qubit(m, mu, int(PauliAxis(axis)))


def local_paulis(m: int, mu: int) -> np.ndarray:
    """The three Pauli operators on qubit ``mu``, stacked as ``(3, d, d)``."""
    return np.stack([pauli_on_qubit(m, mu, a) for a in PauliAxis])


def sigma_along(m: int, mu: int, direction) -> np.ndarray:
    """``n . sigma`` acting on qubit ``mu``."""
    n = np.asarray(direction, dtype=float)
    return np.tensordot(n, local_paulis(m, mu), axes=1)


def unit_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    dev = abs(np.linalg.norm(v) - 1.0)
    if dev > NORM_TOL:
        raise ValueError(f"direction norm deviates from 1 by {dev:.3e}")
    return v


def _real_expectation(value: complex) -> float:
    if abs(value.imag) > IMAG_TOL:
        raise ImaginaryExpectation(f"imaginary part {value.imag:.3e}")
    return float(value.real)


def bloch_vector(rho, mu: int) -> np.ndarray:
    """Components ``tr[rho sigma_j^mu]`` for j = x, y, z."""
    rho = as_density(rho)
    m = rho.num_qubits
    return np.array(
        [_real_expectation(np.trace(rho.matrix @ pauli_on_qubit(m, mu, a))) for a in PauliAxis]
    )


def pure_bloch_vector(state: PureState, mu: int) -> np.ndarray:
    psi = state.amplitudes
    return np.array(
        [
            _real_expectation(np.vdot(psi, pauli_on_qubit(state.num_qubits, mu, a) @ psi))
            for a in PauliAxis
        ]
    )


def purity(rho) -> float:
    r = as_density(rho).matrix
    # tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(r) ** 2))


def hs_distance(a, b) -> float:
    """``sqrt(1/2 tr[(A-B)^dagger (A-B)])`` for two same-shape matrices."""
    a = a.matrix if isinstance(a, DensityMatrix) else np.asarray(a, dtype=complex)
    b = b.matrix if isinstance(b, DensityMatrix) else np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.sqrt(0.5 * np.sum(np.abs(diff) ** 2)))


def partial_transpose(matrix: np.ndarray, mu: int) -> np.ndarray:
    d = matrix.shape[0]
    m = num_qubits_for(d)
    if not 0 <= mu < m:
        raise IndexError(f"qubit index {mu} out of range for {m} qubits")
    t = matrix.reshape((2,) * (2 * m))
    t = np.swapaxes(t, mu, m + mu)
    return t.reshape(d, d)


# --- SU(2) -------------------------------------------------------------------


def rotation(axis: PauliAxis | int, theta: float) -> np.ndarray:
    """``exp(-i theta sigma_axis / 2)``."""
    s = PauliAxis(axis).matrix
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * s


def su2_zyz(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """``R_z(alpha) R_y(beta) R_z(gamma)``."""
    cb, sb = np.cos(beta / 2), np.sin(beta / 2)
    ep = np.exp(-0.5j * (alpha + gamma))
    em = np.exp(-0.5j * (alpha - gamma))
    return np.array([[ep * cb, -em * sb], [em.conjugate() * sb, ep.conjugate() * cb]])


def zyz_angles(u: np.ndarray) -> tuple[float, float, float]:
    """ZYZ angles of a 2x2 unitary, up to global phase."""
    u = np.asarray(u, dtype=complex)
    u = u / np.sqrt(np.linalg.det(u))
    beta = 2 * np.arctan2(abs(u[1, 0]), abs(u[0, 0]))
    ap = -2 * np.angle(u[0, 0]) if abs(u[0, 0]) > 1e-12 else 0.0
    am = 2 * np.angle(u[1, 0]) if abs(u[1, 0]) > 1e-12 else 0.0
    alpha = 0.5 * (ap + am)
    gamma = 0.5 * (ap - am)
    return float(alpha), float(beta), float(gamma)


def apply_on_qubit(matrix: np.ndarray, u: np.ndarray, mu: int) -> np.ndarray:
    """``U rho U^dagger`` with the 2x2 ``u`` on qubit ``mu``."""
    m = num_qubits_for(matrix.shape[0])
    full = np.kron(np.kron(np.eye(2**mu), u), np.eye(2 ** (m - mu - 1)))
    return full @ matrix @ full.conj().T


def local_unitary(us) -> np.ndarray:
    """Tensor product of one 2x2 unitary per qubit."""
    out = np.eye(1, dtype=complex)
    for u in us:
        out = np.kron(out, u)
    return out


# --- Sampling ----------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_pure_state(m: int, seed=None) -> PureState:
    """Haar-random state: normalized complex Gaussian vector."""
    if m < 1:
        raise ValueError("need at least one qubit")
    rng = _rng(seed)
    psi = rng.normal(size=2**m) + 1j * rng.normal(size=2**m)
    return make_pure(psi / np.linalg.norm(psi))


def random_su2(seed=None) -> tuple[float, float, float]:
    """Haar-random ZYZ angles (cos(beta) uniform, alpha and gamma uniform)."""
    rng = _rng(seed)
    alpha, gamma = rng.uniform(0, 2 * np.pi, size=2)
    beta = float(np.arccos(rng.uniform(-1.0, 1.0)))
    return float(alpha), beta, float(gamma)


def random_local_unitary(m: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    return local_unitary([su2_zyz(*random_su2(rng)) for _ in range(m)])


def random_density(m: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Induced-measure mixed state ``G G^dagger / tr`` with Ginibre ``G``."""
    rng = _rng(seed)
    d = 2**m
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return make_density(rho / np.trace(rho).real)
