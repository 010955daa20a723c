"""Quantum correlation distance (QCD) of mixed multi-qubit states.

For each qubit ``mu`` the correlation matrix ``A^mu_ij = tr[rho s_i rho s_j]``
(``s_i`` the Pauli operators on that qubit) bounds the squared
Hilbert-Schmidt velocity of local rotations from below. The per-qubit QCD is
``tr(rho^2) - lambda_max(A^mu)`` and the QCD is their sum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pure_ed import MetricTensor
from .qstate import as_density, local_paulis, purity, sigma_along, unit_vector

ASYMMETRY_TOL = 1e-10
IMAG_TOL = 1e-10


class AsymmetryTooLarge(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    qubit: int
    entries: np.ndarray

    def quadratic(self, n) -> float:
        n = np.asarray(n, dtype=float)
        return float(n @ self.entries @ n)


@dataclass(frozen=True)
class QubitQcd:
    value: float
    lambda_max: float
    direction: np.ndarray


@dataclass(frozen=True)
class QcdResult:
    total: float
    purity: float
    per_qubit: tuple[QubitQcd, ...]

    @property
    def values(self) -> list[float]:
        return [q.value for q in self.per_qubit]


def correlation_matrix(rho, mu: int) -> CorrelationMatrix:
    rho = as_density(rho)
    r = rho.matrix
    xs = np.array([r @ s for s in local_paulis(rho.num_qubits, mu)])
    # tr(X_i X_j) = sum_ab X_i[a, b] X_j[b, a]
    a = np.einsum("iab,jba->ij", xs, xs)
    imag = float(np.max(np.abs(a.imag)))
    if imag > IMAG_TOL:
        raise AsymmetryTooLarge(f"imaginary residue {imag:.3e} in A^{mu}")
    a = a.real
    asym = float(np.max(np.abs(a - a.T)))
    if asym > ASYMMETRY_TOL:
        raise AsymmetryTooLarge(f"asymmetry {asym:.3e} in A^{mu}")
    return CorrelationMatrix(mu, 0.5 * (a + a.T))


def top_eigenpair(a: np.ndarray) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and its unit eigenvector, sign fixed so the
    largest-magnitude component is positive."""
    w, v = np.linalg.eigh(a)
    vec = v[:, -1]
    k = int(np.argmax(np.abs(vec)))
    if vec[k] < 0:
        vec = -vec
    return float(w[-1]), vec


def qcd(rho) -> QcdResult:
    rho = as_density(rho)
    pur = purity(rho)
    per = []
    for mu in range(rho.num_qubits):
        lam, vec = top_eigenpair(correlation_matrix(rho, mu).entries)
        per.append(QubitQcd(pur - lam, lam, vec))
    return QcdResult(float(sum(q.value for q in per)), pur, tuple(per))


def qcd_qubit(rho, mu: int) -> float:
    rho = as_density(rho)
    lam, _ = top_eigenpair(correlation_matrix(rho, mu).entries)
    return purity(rho) - lam


def metric_mixed(rho, directions) -> MetricTensor:
    """Hilbert-Schmidt metric on local rotations at ``rho``.

    ``g_{mu nu} = 1/2 tr(rho^2 {a, b}) - tr(rho a rho b)`` with
    ``a = n^mu . sigma^mu`` and ``b = n^nu . sigma^nu``.
    """
    rho = as_density(rho)
    m = rho.num_qubits
    dirs = tuple(unit_vector(v) for v in directions)
    if len(dirs) != m:
        raise ValueError(f"expected {m} directions, got {len(dirs)}")
    r = rho.matrix
    r2 = r @ r
    ops = [sigma_along(m, mu, dirs[mu]) for mu in range(m)]
    ra = [r @ a for a in ops]
    g = np.empty((m, m), dtype=complex)
    for mu in range(m):
        for nu in range(m):
            a, b = ops[mu], ops[nu]
            anti = np.trace(r2 @ (a @ b + b @ a))
            g[mu, nu] = 0.5 * anti - np.trace(ra[mu] @ ra[nu])
    imag = float(np.max(np.abs(g.imag)))
    if imag > 1e-10:
        raise ValueError(f"metric entry has imaginary part {imag:.3e}")
    g = g.real
    return MetricTensor(m, 0.5 * (g + g.T), dirs)


def sphere_grid(resolution_deg: float) -> np.ndarray:
    """Equal-angle (theta, phi) grid of unit vectors; not equal-area."""
    if resolution_deg < 0.5:
        raise ValueError("angular resolution must be >= 0.5 degrees")
    step = np.deg2rad(resolution_deg)
    theta = np.arange(0.0, np.pi + 0.5 * step, step)
    phi = np.arange(0.0, 2 * np.pi, step)
    t, p = np.meshgrid(theta, phi, indexing="ij")
    return np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], axis=-1).reshape(-1, 3)


def qcd_bruteforce(rho, angular_resolution: float = 1.0) -> float:
    """QCD by direct search over a direction grid, one qubit at a time.

    The trace of the metric separates into independent per-qubit terms, so
    each qubit's direction is minimized on its own.
    """
    rho = as_density(rho)
    grid = sphere_grid(angular_resolution)
    pur = purity(rho)
    total = 0.0
    for mu in range(rho.num_qubits):
        a = correlation_matrix(rho, mu).entries
        quad = np.einsum("ki,ij,kj->k", grid, a, grid)
        total += pur - float(quad.max())
    return total
