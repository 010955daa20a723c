"""Entanglement distance (ED) of mixed states.

Given an ensemble ``rho = sum_j p_j rho_j`` and one SU(2) element ``U_j`` per
member acting on qubit ``mu``, the locally mixed state is

    rho_U = sum_j p_j U_j rho_j U_j^dagger.

The per-qubit ED is the infimum of the QCD of qubit ``mu`` of ``rho_U`` over
the ``U_j``; the ED is the infimum, over ensembles, of the sum of per-qubit
values. The inner infimum is searched with Nelder-Mead from the identity plus
random restarts. The outer infimum is either pinned to the spectral
decomposition (``eigen-only``) or searched over isometric remixings of it
(``full``).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ._kernel import pair_blocks, rotated_qcd
from .qstate import (
    DensityMatrix,
    as_density,
    make_density,
    pauli_on_qubit,
    su2_zyz,
)

log = logging.getLogger(__name__)

EIGEN_DROP_TOL = 1e-12
DEGENERACY_TOL = 1e-9
RECONSTRUCT_TOL = 1e-10
ISOMETRY_TOL = 1e-10
PURE_TOL = 1e-10

MODES = ("eigen-only", "full")


class NonPureBase(ValueError):
    pass


class NonIsometric(ValueError):
    pass


@dataclass(frozen=True)
class OptimizerOptions:
    restarts: int = 16
    seed: int = 0
    mode: str = "eigen-only"
    m_max: int | None = None
    fatol: float = 1e-10
    xatol: float = 1e-8
    maxfev: int = 20000
    zero_threshold: float = 1e-3
    # C_mu >= 0, so anything below this is already the global minimum
    stop_below: float = 1e-13
    polish: bool = True
    outer_restarts: int = 2
    outer_maxfev: int = 40
    outer_inner_maxfev: int = 2000

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.restarts < 0:
            raise ValueError("restarts must be >= 0")
        if self.m_max is not None and self.m_max < 1:
            raise ValueError("m_max must be positive")


@dataclass(frozen=True, eq=False)
class Decomposition:
    weights: np.ndarray
    members: tuple[DensityMatrix, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or len(w) != len(self.members) or len(w) == 0:
            raise ValueError("need one positive weight per member")
        if np.any(w <= 0):
            raise ValueError(f"weights must be strictly positive, got {w}")
        if abs(w.sum() - 1.0) > RECONSTRUCT_TOL:
            raise ValueError(f"weights sum to {w.sum():.12g}, not 1")
        dims = {mem.dim for mem in self.members}
        if len(dims) != 1:
            raise ValueError(f"members have differing dimensions {sorted(dims)}")
        if self.labels is not None and len(self.labels) != len(w):
            raise ValueError("one label per member")
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def num_qubits(self) -> int:
        return self.members[0].num_qubits

    def reconstruct(self) -> np.ndarray:
        return sum(p * mem.matrix for p, mem in zip(self.weights, self.members))

    def is_pure(self) -> bool:
        return all(abs(np.sum(np.abs(mem.matrix) ** 2) - 1.0) < PURE_TOL for mem in self.members)

    def columns(self) -> tuple[np.ndarray, np.ndarray]:
        """Vectors ``sqrt(p_j lambda) e`` spanning every member, with the
        index of the member each vector came from."""
        cols, owner = [], []
        for j, (p, mem) in enumerate(zip(self.weights, self.members)):
            lam, vec = np.linalg.eigh(mem.matrix)
            for k in np.flatnonzero(lam > EIGEN_DROP_TOL):
                cols.append(np.sqrt(p * lam[k]) * vec[:, k])
                owner.append(j)
        return np.array(cols), np.array(owner, dtype=np.int64)

    def pure_vectors(self) -> np.ndarray:
        if not self.is_pure():
            raise NonPureBase("every member must be a pure state")
        vecs = []
        for mem in self.members:
            lam, vec = np.linalg.eigh(mem.matrix)
            vecs.append(vec[:, -1])
        return np.array(vecs)


@dataclass(frozen=True, eq=False)
class LocalUnitaryAssignment:
    """ZYZ angles, one triple per ensemble member, for rotations of ``qubit``."""

    qubit: int
    angles: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float).reshape(-1, 3)
        object.__setattr__(self, "angles", a)

    @classmethod
    def identity(cls, qubit: int, members: int) -> LocalUnitaryAssignment:
        return cls(qubit, np.zeros((members, 3)))

    def unitaries(self) -> list[np.ndarray]:
        return [su2_zyz(*row) for row in self.angles]


@dataclass(frozen=True)
class RestartRecord:
    start: str
    value: float
    converged: bool
    nfev: int


@dataclass(frozen=True, eq=False)
class InnerResult:
    value: float
    assignment: LocalUnitaryAssignment
    restarts: tuple[RestartRecord, ...]

    @property
    def converged(self) -> bool:
        best = min(self.restarts, key=lambda r: r.value)
        return best.converged


@dataclass(frozen=True, eq=False)
class Witness:
    decomposition: Decomposition
    assignments: tuple[LocalUnitaryAssignment, ...]


@dataclass(frozen=True)
class OptimizerReport:
    mode: str
    raw_total: float
    raw_per_qubit: tuple[float, ...]
    restarts_used: tuple[int, ...]
    best_per_restart: tuple[tuple[float, ...], ...]
    converged: tuple[bool, ...]
    decompositions_tried: int
    clamped: bool


@dataclass(frozen=True, eq=False)
class EdResult:
    total: float
    per_qubit: tuple[float, ...]
    witness: Witness
    report: OptimizerReport


# --- Decompositions ----------------------------------------------------------


def _tie_breaker(m: int) -> np.ndarray:
    """Fixed Hermitian operator used to pick a basis inside degenerate
    eigenspaces. Its eigenbasis on two qubits is the Bell basis, with
    distinct eigenvalues for all four Bell states."""
    d = 2**m
    if m == 1:
        return pauli_on_qubit(1, 0, 3).copy()
    k = np.zeros((d, d), dtype=complex)
    for mu in range(m):
        for nu in range(mu + 1, m):
            for axis in (1, 2, 3):
                k += axis * pauli_on_qubit(m, mu, axis) @ pauli_on_qubit(m, nu, axis)
    return k


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # first component within 1e-9 of the largest magnitude is made real positive
    k = int(np.argmax(np.abs(v) > np.abs(v).max() - 1e-9))
    return v * np.exp(-1j * np.angle(v[k]))


def eigen_decomposition(rho) -> Decomposition:
    """Spectral ensemble, descending weights, near-zero eigenvalues dropped.

    Inside a degenerate eigenspace the basis is fixed by diagonalizing a
    fixed Bell-basis-friendly operator, so e.g. a Werner state decomposes
    into Bell projectors rather than an arbitrary rotation of them.
    """
    rho = as_density(rho)
    lam, vec = np.linalg.eigh(rho.matrix)
    order = np.argsort(-lam, kind="stable")
    lam, vec = lam[order], vec[:, order]
    keep = lam > EIGEN_DROP_TOL
    lam, vec = lam[keep], vec[:, keep]
    tie = _tie_breaker(rho.num_qubits)
    start = 0
    while start < len(lam):
        stop = start + 1
        while stop < len(lam) and lam[start] - lam[stop] < DEGENERACY_TOL:
            stop += 1
        if stop - start > 1:
            sub = vec[:, start:stop]
            h = sub.conj().T @ tie @ sub
            _, w = np.linalg.eigh(0.5 * (h + h.conj().T))
            vec[:, start:stop] = sub @ w[:, ::-1]
            lam[start:stop] = lam[start:stop].mean()
        start = stop
    weights = lam / lam.sum()
    members = tuple(_pure_member(_fix_phase(vec[:, i])) for i in range(len(lam)))
    return Decomposition(weights, members)


def _pure_member(v: np.ndarray) -> DensityMatrix:
    v = v / np.linalg.norm(v)
    p = np.outer(v, v.conj())
    return make_density(0.5 * (p + p.conj().T))


def mix_decomposition(base: Decomposition, isometry) -> Decomposition:
    """Ensemble ``phi_k = sum_j V_kj sqrt(p_j) psi_j`` from a pure ensemble.

    Every ensemble of ``rho`` arises this way from its spectral ensemble.
    Members whose weight underflows are dropped.
    """
    v = np.asarray(isometry, dtype=complex)
    r = len(base)
    if v.ndim != 2 or v.shape[1] != r or v.shape[0] < r:
        raise NonIsometric(f"isometry must be m x {r} with m >= {r}, got {v.shape}")
    dev = float(np.max(np.abs(v.conj().T @ v - np.eye(r))))
    if dev > ISOMETRY_TOL:
        raise NonIsometric(f"columns deviate from orthonormal by {dev:.3e}")
    psi = base.pure_vectors()
    phi = v @ (np.sqrt(base.weights)[:, None] * psi)
    q = np.sum(np.abs(phi) ** 2, axis=1)
    keep = q > EIGEN_DROP_TOL
    members = tuple(_pure_member(phi[k]) for k in np.flatnonzero(keep))
    out = Decomposition(q[keep] / q[keep].sum(), members)
    err = float(np.max(np.abs(out.reconstruct() - base.reconstruct())))
    if err > RECONSTRUCT_TOL:
        raise NonIsometric(f"remixed ensemble misses the state by {err:.3e}")
    return out


def apply_local_mix(decomp: Decomposition, assignment: LocalUnitaryAssignment) -> DensityMatrix:
    if len(assignment.angles) != len(decomp):
        raise ValueError(
            f"assignment has {len(assignment.angles)} rotations for {len(decomp)} members"
        )
    m = decomp.num_qubits
    mu = assignment.qubit
    left, right = np.eye(2**mu), np.eye(2 ** (m - mu - 1))
    out = np.zeros((2**m, 2**m), dtype=complex)
    for p, mem, u in zip(decomp.weights, decomp.members, assignment.unitaries()):
        full = np.kron(np.kron(left, u), right)
        out += p * full @ mem.matrix @ full.conj().T
    return make_density(0.5 * (out + out.conj().T))


# --- Inner minimization ------------------------------------------------------


class _Objective:
    """Rotated per-qubit QCD of one ensemble, compiled form."""

    def __init__(self, decomp: Decomposition, mu: int):
        m = decomp.num_qubits
        if not 0 <= mu < m:
            raise IndexError(f"qubit index {mu} out of range for {m} qubits")
        cols, owner = decomp.columns()
        self.blocks = pair_blocks(cols, mu, m)
        self.owner = owner
        self.size = 3 * len(decomp)

    def __call__(self, x: np.ndarray) -> float:
        return float(rotated_qcd(np.ascontiguousarray(x, dtype=np.float64), self.blocks, self.owner))


def inner_objective(decomp: Decomposition, assignment: LocalUnitaryAssignment) -> float:
    """Per-qubit QCD of the locally mixed state at the given angles."""
    return _Objective(decomp, assignment.qubit)(assignment.angles.ravel())


def _nelder_mead(f, x0, opts: OptimizerOptions, maxfev: int | None = None):
    res = minimize(
        f,
        x0,
        method="Nelder-Mead",
        options={
            "fatol": opts.fatol,
            "xatol": opts.xatol,
            "maxfev": maxfev or opts.maxfev,
            "adaptive": True,
        },
    )
    x, fx, ok, nfev = res.x, float(res.fun), bool(res.success), int(res.nfev)
    if opts.polish and fx > opts.stop_below:
        # a fresh simplex at the optimum shakes off premature collapse
        res2 = minimize(
            f,
            x,
            method="Nelder-Mead",
            options={"fatol": opts.fatol, "xatol": opts.xatol, "maxfev": maxfev or opts.maxfev, "adaptive": True},
        )
        nfev += int(res2.nfev)
        if res2.fun <= fx:
            x, fx, ok = res2.x, float(res2.fun), bool(res2.success)
    return x, fx, ok, nfev


def ed_inner(
    decomp: Decomposition,
    mu: int,
    opts: OptimizerOptions = OptimizerOptions(),
    initial=(),
    restarts: int | None = None,
    maxfev: int | None = None,
) -> InnerResult:
    """Minimize the per-qubit QCD of ``rho_U`` over member rotations on ``mu``.

    Starts, in order: the identity, each angle array in ``initial`` (warm
    starts), then ``restarts`` uniform random angle vectors drawn from a
    stream seeded by ``(opts.seed, mu)``, so a run with more restarts extends
    the same sequence. Stops early once the value reaches ``opts.stop_below``.
    Non-convergence is reported per restart, not raised.
    """
    f = _Objective(decomp, mu)
    n_rand = opts.restarts if restarts is None else restarts
    rng = np.random.default_rng([opts.seed, mu])
    starts = [("identity", np.zeros(f.size))]
    for i, a in enumerate(initial):
        a = np.asarray(a.angles if isinstance(a, LocalUnitaryAssignment) else a, dtype=float).ravel()
        if a.shape != (f.size,):
            raise ValueError(f"warm start {i} has {a.size} angles, expected {f.size}")
        starts.append((f"warm{i}", a))

    records: list[RestartRecord] = []
    best_x, best_f = None, np.inf

    def run(label, x0):
        nonlocal best_x, best_f
        x, fx, ok, nfev = _nelder_mead(f, x0, opts, maxfev)
        records.append(RestartRecord(label, fx, ok, nfev))
        if fx < best_f:
            best_x, best_f = x, fx

    for label, x0 in starts:
        run(label, x0)
        if best_f <= opts.stop_below:
            break
    for i in range(n_rand):
        x0 = rng.uniform(-np.pi, np.pi, f.size)
        if best_f <= opts.stop_below:
            break
        run(f"random{i}", x0)
    return InnerResult(best_f, LocalUnitaryAssignment(mu, best_x.reshape(-1, 3)), tuple(records))


# --- Outer minimization ------------------------------------------------------


def _isometry_from_params(params: np.ndarray, m: int, r: int) -> np.ndarray:
    z = params[: m * r].reshape(m, r) + 1j * params[m * r :].reshape(m, r)
    q, rr = np.linalg.qr(z)
    d = np.diag(rr)
    phases = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return q * phases


def _random_isometry(rng: np.random.Generator, m: int, r: int) -> np.ndarray:
    params = rng.normal(size=2 * m * r)
    return _isometry_from_params(params, m, r), params


def _evaluate(decomp, opts, initial=None, restarts=None, maxfev=None):
    results = []
    for mu in range(decomp.num_qubits):
        warm = () if initial is None else (initial[mu],)
        results.append(ed_inner(decomp, mu, opts, warm, restarts=restarts, maxfev=maxfev))
    return results


def _search_remixings(base: Decomposition, opts: OptimizerOptions, rng):
    """Random isometric remixings of ``base``, each refined by Nelder-Mead
    on the isometry entries. Inner problems are warm-started from the best
    angles seen at the current ensemble size."""
    r = len(base)
    m_max = opts.m_max if opts.m_max is not None else r * r
    found = []
    for m in range(r, m_max + 1):
        for _ in range(opts.outer_restarts):
            _, p0 = _random_isometry(rng, m, r)
            warm: dict[int, list] = {}

            def outer(params, m=m, warm=warm):
                try:
                    decomp = mix_decomposition(base, _isometry_from_params(params, m, r))
                except NonIsometric:
                    return np.inf
                n = len(decomp)
                init = warm.get(n)
                res = _evaluate(decomp, opts, init, restarts=0, maxfev=opts.outer_inner_maxfev)
                warm[n] = [x.assignment for x in res]
                return sum(x.value for x in res)

            out = minimize(
                outer,
                p0,
                method="Nelder-Mead",
                options={"maxfev": opts.outer_maxfev, "fatol": opts.fatol, "adaptive": True},
            )
            found.append(mix_decomposition(base, _isometry_from_params(out.x, m, r)))
            log.debug("remixing m=%d: outer value %.6g", m, out.fun)
    return found


def ed(
    rho,
    opts: OptimizerOptions = OptimizerOptions(),
    candidates=(),
    warm_start: Witness | None = None,
) -> EdResult:
    """Entanglement distance of ``rho``.

    ``candidates`` are extra ensembles to include in the outer search (for
    instance a known product-state ensemble). ``warm_start`` is a witness
    from a nearby state (e.g. the previous point of a parameter sweep); its
    angles are carried over to matching members of the spectral ensemble.
    In ``full`` mode the best remixings found are re-solved with the full
    restart budget before the minimum is taken.
    """
    rho = as_density(rho)
    base = eigen_decomposition(rho)
    target = rho.matrix
    initial = None if warm_start is None else transfer_assignments(warm_start, base)
    pool = [(base, initial)]
    for cand in candidates:
        err = float(np.max(np.abs(cand.reconstruct() - target)))
        if err > RECONSTRUCT_TOL:
            raise ValueError(f"candidate ensemble misses the state by {err:.3e}")
        pool.append((cand, None))
    if opts.mode == "full":
        rng = np.random.default_rng([opts.seed, 1_000_003])
        pool.extend((d, None) for d in _search_remixings(base, opts, rng))

    best = None
    for decomp, init in pool:
        res = _evaluate(decomp, opts, init)
        total = sum(x.value for x in res)
        if best is None or total < best[0]:
            best = (total, decomp, res)
    raw_total, decomp, res = best
    raw = tuple(float(x.value) for x in res)
    clamped = raw_total < opts.zero_threshold
    per = tuple(0.0 for _ in raw) if clamped else raw
    report = OptimizerReport(
        mode=opts.mode,
        raw_total=float(raw_total),
        raw_per_qubit=raw,
        restarts_used=tuple(len(x.restarts) for x in res),
        best_per_restart=tuple(tuple(rec.value for rec in x.restarts) for x in res),
        converged=tuple(x.converged for x in res),
        decompositions_tried=len(pool),
        clamped=clamped,
    )
    witness = Witness(decomp, tuple(x.assignment for x in res))
    return EdResult(float(sum(per)), per, witness, report)


def transfer_assignments(
    witness: Witness, decomp: Decomposition, min_overlap: float = 0.99
) -> tuple[LocalUnitaryAssignment, ...]:
    """Map a witness's member rotations onto ``decomp``.

    Each member takes the angles of the witness member it overlaps most
    (``tr(rho_a rho_b)``), or the identity when no overlap exceeds
    ``min_overlap``.
    """
    old = witness.decomposition.members
    angles_by_qubit = [a.angles for a in witness.assignments]
    out = []
    for mu, old_angles in enumerate(angles_by_qubit):
        rows = []
        for mem in decomp.members:
            overlaps = [float(np.real(np.sum(mem.matrix * o.matrix.conj()))) for o in old]
            k = int(np.argmax(overlaps))
            rows.append(old_angles[k] if overlaps[k] > min_overlap else np.zeros(3))
        out.append(LocalUnitaryAssignment(mu, np.array(rows)))
    return tuple(out)


# --- Werner fixed point ------------------------------------------------------


def werner_fixed_point_angle(p: float) -> float | None:
    """Rotation angle at which the Werner ensemble becomes classical on one
    qubit; ``None`` when no solution exists (exactly when ``p < 1/2``)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Werner parameter {p} outside [0, 1]")
    arg = 3.0 / (2.0 * p) - 2.0 if p > 0 else np.inf
    if arg > 1.0 + 1e-15 or arg < -1.0 - 1e-15:
        return None
    return float(np.arccos(np.clip(arg, -1.0, 1.0)))


def werner_schedule(theta: float, mu: int, labels=("psi+", "psi-", "phi+", "phi-")) -> LocalUnitaryAssignment:
    """Member rotations ``U_z(theta) U_x(pi)`` on psi+, ``U_z(pi - theta) U_x(pi)``
    on psi-, identity on phi+-, written as ZYZ angles.

    ``R_x(pi) = R_z(-pi/2) R_y(pi) R_z(pi/2)`` so ``R_z(t) R_x(pi)`` has ZYZ
    angles ``(t - pi/2, pi, pi/2)``.
    """
    table = {
        "psi+": (theta - np.pi / 2, np.pi, np.pi / 2),
        "psi-": (np.pi / 2 - theta, np.pi, np.pi / 2),
        "phi+": (0.0, 0.0, 0.0),
        "phi-": (0.0, 0.0, 0.0),
    }
    return LocalUnitaryAssignment(mu, np.array([table[k] for k in labels]))

