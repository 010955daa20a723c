"""Entanglement distance of pure states.

The metric tensor here is the Fubini-Study metric restricted to local
rotations: for directions ``v^mu``,

    g_{mu nu} = <(v.sigma)^mu (v.sigma)^nu> - <(v.sigma)^mu><(v.sigma)^nu>

Its trace is minimized by aligning each ``v^mu`` with the qubit's Bloch
vector, which gives ``E = M - sum_mu |<sigma^mu>|^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import PureState, pure_bloch_vector, sigma_along, unit_vector

DEGENERATE_BLOCH_TOL = 1e-9
METRIC_IMAG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MetricTensor:
    num_qubits: int
    entries: np.ndarray
    directions: tuple[np.ndarray, ...]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))


@dataclass(frozen=True)
class DirectionChoice:
    directions: tuple[np.ndarray, ...]
    degenerate: tuple[bool, ...]


@dataclass(frozen=True)
class BlockPartition:
    blocks: tuple[tuple[int, ...], ...]

    @property
    def irreducible(self) -> bool:
        """True when the tensor is a single block at the evaluated directions.

        This is evidence at one direction set only, not a certificate of
        genuine multipartite entanglement.
        """
        return len(self.blocks) == 1


def _check_directions(state: PureState, directions) -> tuple[np.ndarray, ...]:
    dirs = tuple(unit_vector(v) for v in directions)
    if len(dirs) != state.num_qubits:
        raise ValueError(f"expected {state.num_qubits} directions, got {len(dirs)}")
    return dirs


def _real_matrix(g: np.ndarray) -> np.ndarray:
    imag = float(np.max(np.abs(g.imag)))
    if imag > METRIC_IMAG_TOL:
        raise ValueError(f"metric entry has imaginary part {imag:.3e}")
    return g.real


def fs_metric(state: PureState, directions) -> MetricTensor:
    dirs = _check_directions(state, directions)
    m = state.num_qubits
    psi = state.amplitudes
    # phi[mu] = (v.sigma)^mu |s>
    phi = np.array([sigma_along(m, mu, dirs[mu]) @ psi for mu in range(m)])
    second = phi.conj() @ phi.T
    first = phi.conj() @ psi
    g = _real_matrix(second - np.outer(first, first))
    g = 0.5 * (g + g.T)
    return MetricTensor(m, g, dirs)


def trace_g(state: PureState, directions) -> float:
    dirs = _check_directions(state, directions)
    total = 0.0
    for mu, v in enumerate(dirs):
        total += 1.0 - float(v @ pure_bloch_vector(state, mu)) ** 2
    return total


def optimal_directions(state: PureState) -> DirectionChoice:
    """Unit Bloch vectors (sign +) per qubit.

    A qubit whose Bloch vector is below ``DEGENERATE_BLOCH_TOL`` gets +z and a
    degeneracy flag: every direction attains the infimum there.
    """
    dirs, flags = [], []
    for mu in range(state.num_qubits):
        b = pure_bloch_vector(state, mu)
        norm = np.linalg.norm(b)
        if norm > DEGENERATE_BLOCH_TOL:
            dirs.append(b / norm)
            flags.append(False)
        else:
            dirs.append(np.array([0.0, 0.0, 1.0]))
            flags.append(True)
    return DirectionChoice(tuple(dirs), tuple(flags))


def pure_ed(state: PureState) -> float:
    m = state.num_qubits
    return float(m - sum(np.sum(pure_bloch_vector(state, mu) ** 2) for mu in range(m)))


def block_partition(g: MetricTensor, zero_tol: float = 1e-9) -> BlockPartition:
    """Connected components of the graph with an edge wherever ``|g_ij| > zero_tol``."""
    n = g.num_qubits
    adj = np.abs(g.entries) > zero_tol
    seen = [False] * n
    blocks = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.flatnonzero(adj[i]):
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        blocks.append(tuple(sorted(comp)))
    return BlockPartition(tuple(blocks))
