"""Closed-form reference values: Bell-diagonal and Werner families,
Wootters concurrence and the PPT test.

Bell-state naming follows the convention used throughout this package:

    psi+- = (|00> +- |11>)/sqrt2,    phi+- = (|01> +- |10>)/sqrt2

which swaps the more common phi/psi labels. Weights are always listed in the
order (psi+, psi-, phi+, phi-).
"""

from __future__ import annotations

import itertools

import numpy as np

from .qstate import (
    SIGMA_Y,
    DensityMatrix,
    PureState,
    as_density,
    make_density,
    make_pure,
    pauli_on_qubit,
    partial_transpose,
    random_su2,
    su2_zyz,
)

BELL_LABELS = ("psi+", "psi-", "phi+", "phi-")
_ALIASES = {"ψ+": "psi+", "ψ-": "psi-", "ψ−": "psi-", "φ+": "phi+", "φ-": "phi-", "φ−": "phi-"}

SIMPLEX_TOL = 1e-12
TETRA_TOL = 1e-10
PPT_TOL = 1e-10

_S = 1 / np.sqrt(2)
_BELL_VECTORS = {
    "psi+": np.array([_S, 0, 0, _S]),
    "psi-": np.array([_S, 0, 0, -_S]),
    "phi+": np.array([0, _S, _S, 0]),
    "phi-": np.array([0, _S, -_S, 0]),
}

# (c1, c2, c3) with c_i = <sigma_i sigma_i> for each Bell state
BELL_CORRELATIONS = np.array(
    [
        [1.0, -1.0, 1.0],
        [-1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0],
        [-1.0, -1.0, -1.0],
    ]
)


def bell_state(label: str) -> PureState:
    key = _ALIASES.get(label, label)
    if key not in _BELL_VECTORS:
        raise ValueError(f"unknown Bell state {label!r}; expected one of {BELL_LABELS}")
    return make_pure(_BELL_VECTORS[key])


def bell_basis() -> np.ndarray:
    """Columns are psi+, psi-, phi+, phi-."""
    return np.stack([_BELL_VECTORS[k] for k in BELL_LABELS], axis=1).astype(complex)


def bd_weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (4,):
        raise ValueError(f"expected 4 Bell weights, got shape {w.shape}")
    if np.any(w < -SIMPLEX_TOL) or abs(w.sum() - 1.0) > SIMPLEX_TOL:
        raise ValueError(f"weights {w} are not on the probability simplex")
    return w


def in_tetrahedron(c, tol: float = TETRA_TOL) -> bool:
    return bool(np.all(weights_from_c(c) >= -tol))


def in_octahedron(c, tol: float = 1e-9) -> bool:
    """Separable region of the BD tetrahedron: |c1| + |c2| + |c3| <= 1."""
    return bool(np.sum(np.abs(np.asarray(c, dtype=float))) <= 1.0 + tol)


def bd_correlations(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.shape != (3,):
        raise ValueError(f"expected 3 correlations, got shape {c.shape}")
    if np.any(np.abs(c) > 1 + TETRA_TOL) or not in_tetrahedron(c):
        raise ValueError(f"correlation vector {c} lies outside the BD tetrahedron")
    return c


def weights_from_c(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    return 0.25 * (1.0 + BELL_CORRELATIONS @ c)


def c_from_weights(w) -> np.ndarray:
    return BELL_CORRELATIONS.T @ bd_weights(w)


def c_from_rho(rho) -> np.ndarray:
    r = as_density(rho)
    if r.num_qubits != 2:
        raise ValueError("BD correlations need a two-qubit state")
    return np.array(
        [np.trace(r.matrix @ pauli_on_qubit(2, 0, i) @ pauli_on_qubit(2, 1, i)).real for i in (1, 2, 3)]
    )


def bd_state(w) -> DensityMatrix:
    w = bd_weights(w)
    b = bell_basis()
    return make_density((b * w) @ b.conj().T)


def bd_from_c(c) -> DensityMatrix:
    c = bd_correlations(c)
    rho = np.eye(4, dtype=complex)
    for i in (1, 2, 3):
        rho += c[i - 1] * pauli_on_qubit(2, 0, i) @ pauli_on_qubit(2, 1, i)
    return make_density(rho / 4)


_PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def bd_qcd(w) -> float:
    """``2 sum p^2 - 4 max_{pairings} (p_i p_j + p_k p_l)``."""
    p = bd_weights(w)
    best = max(p[i] * p[j] + p[k] * p[l] for (i, j), (k, l) in _PAIRINGS)
    return float(2 * np.sum(p**2) - 4 * best)


def werner_weights(p: float) -> np.ndarray:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Werner parameter {p} outside [0, 1]")
    return np.array([p / 3, p / 3, p / 3, 1 - p])


def werner_state(p: float) -> DensityMatrix:
    return bd_state(werner_weights(p))


def werner_qcd(p: float) -> float:
    werner_weights(p)
    return 2 * (1 - 4 * p / 3) ** 2


def werner_ed(p: float) -> float:
    # Theta(0) := 1; the factor (1 - 2p)^2 vanishes there anyway
    werner_weights(p)
    return 2 * (1 - 2 * p) ** 2 if p <= 0.5 else 0.0


def concurrence(rho) -> float:
    """Wootters concurrence, spin flip taken in the computational basis."""
    r = as_density(rho)
    if r.num_qubits != 2:
        raise ValueError("concurrence is defined here for two-qubit states only")
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    flipped = yy @ r.matrix.conj() @ yy
    w, v = np.linalg.eigh(r.matrix)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
    h = sqrt_rho @ flipped @ sqrt_rho
    lam = np.sqrt(np.clip(np.linalg.eigvalsh(0.5 * (h + h.conj().T)), 0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def bd_concurrence(w) -> float:
    return float(max(0.0, 2 * bd_weights(w).max() - 1))


def ppt_min_eigenvalue(rho, mu: int) -> float:
    r = as_density(rho)
    return float(np.linalg.eigvalsh(partial_transpose(r.matrix, mu))[0])


def is_ppt(rho, mu: int = 0) -> bool:
    return ppt_min_eigenvalue(rho, mu) >= -PPT_TOL


def random_bd_weights(seed=None) -> np.ndarray:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return rng.dirichlet(np.ones(4))


def random_classical_state(m: int, seed=None) -> DensityMatrix:
    """Fully classical state: a mixture of products of local basis states,
    each qubit with its own random orthonormal basis."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    bases = [su2_zyz(*random_su2(rng)) for _ in range(m)]
    probs = rng.dirichlet(np.ones(2**m))
    rho = np.zeros((2**m, 2**m), dtype=complex)
    for bits, p in zip(itertools.product((0, 1), repeat=m), probs):
        v = np.ones(1, dtype=complex)
        for basis, b in zip(bases, bits):
            v = np.kron(v, basis[:, b])
        rho += p * np.outer(v, v.conj())
    return make_density(0.5 * (rho + rho.conj().T))


def bd_decomposition(w):
    """Bell-projector ensemble of a BD state, zero weights dropped."""
    from .ed_mixed import Decomposition

    w = bd_weights(w)
    keep = [i for i in range(4) if w[i] > 0]
    members = tuple(bell_state(BELL_LABELS[i]).density() for i in keep)
    return Decomposition(w[keep] / w[keep].sum(), members, tuple(BELL_LABELS[i] for i in keep))
