"""Cross-oracle property checks run by ``entdist verify``.

Each check draws its samples from its own seeded stream, so the report is a
pure function of ``(seed, count)``. ``bell_vectors`` replaces the Bell basis
used to build Bell-diagonal states inside the checks; it exists so tests can
confirm that a corrupted basis is caught.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import oracles
from .ed_mixed import OptimizerOptions, ed
from .pure_ed import fs_metric, pure_ed, trace_g
from .qcd import metric_mixed, qcd, qcd_bruteforce
from .qstate import (
    PauliAxis,
    hs_distance,
    make_density,
    make_pure,
    pauli_on_qubit,
    random_density,
    random_local_unitary,
    random_pure_state,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    samples: int


def _result(name, errors, tol):
    errs = [float(e) for e in errors]
    worst = max(errs) if errs else 0.0
    return CheckResult(name, bool(worst <= tol), worst, tol, len(errs))


def _bd(w, basis):
    return make_density((basis * w) @ basis.conj().T)


def _random_unit(rng, m):
    v = rng.normal(size=(m, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def check_pauli_algebra(rng, count):
    errs = []
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k], eps[j, i, k] = 1, -1
    for m in (1, 2, 3):
        d = 2**m
        for mu in range(m):
            ops = [pauli_on_qubit(m, mu, a) for a in PauliAxis]
            for i in range(3):
                for j in range(3):
                    want = (i == j) * np.eye(d) + 1j * sum(eps[i, j, k] * ops[k] for k in range(3))
                    errs.append(np.max(np.abs(ops[i] @ ops[j] - want)))
            for nu in range(m):
                if nu != mu:
                    for a in PauliAxis:
                        for b in PauliAxis:
                            x, y = pauli_on_qubit(m, mu, a), pauli_on_qubit(m, nu, b)
                            errs.append(np.max(np.abs(x @ y - y @ x)))
    return _result("pauli_algebra", errs, 1e-12)


def check_hs_triangle(rng, count):
    errs = []
    for _ in range(count):
        a, b, c = (random_density(2, seed=rng).matrix for _ in range(3))
        errs.append(max(0.0, hs_distance(a, c) - hs_distance(a, b) - hs_distance(b, c)))
    return _result("hs_triangle_inequality", errs, 1e-10)


def check_pure_lu_invariance(rng, count):
    errs = []
    for i in range(count):
        m = 2 + i % 3
        s = random_pure_state(m, rng)
        u = random_local_unitary(m, rng)
        errs.append(abs(pure_ed(make_pure(u @ s.amplitudes)) - pure_ed(s)))
    return _result("pure_ed_lu_invariance", errs, 1e-10)


def check_pure_minimality(rng, count):
    errs = []
    for i in range(count):
        m = 2 + i % 2
        s = random_pure_state(m, rng)
        e = pure_ed(s)
        for _ in range(20):
            errs.append(max(0.0, e - trace_g(s, _random_unit(rng, m))))
    return _result("pure_ed_minimality", errs, 1e-10)


def check_pure_reduction(rng, count):
    errs = []
    for i in range(count):
        s = random_pure_state(2 + i % 3, rng)
        errs.append(abs(qcd(s.density()).total - pure_ed(s)))
    return _result("qcd_reduces_to_pure_ed", errs, 1e-10)


def check_classical_nullity(rng, count):
    errs = [abs(qcd(oracles.random_classical_state(2 + i % 2, rng)).total) for i in range(count)]
    return _result("qcd_classical_nullity", errs, 1e-10)


def check_qcd_lu_invariance(rng, count):
    errs = []
    for i in range(count):
        m = 2 + i % 2
        rho = random_density(m, seed=rng)
        u = random_local_unitary(m, rng)
        rot = u @ rho.matrix @ u.conj().T
        errs.append(abs(qcd(make_density(0.5 * (rot + rot.conj().T))).total - qcd(rho).total))
    return _result("qcd_lu_invariance", errs, 1e-9)


def check_bruteforce(rng, count):
    n = max(2, count // 10)
    errs = []
    for _ in range(n):
        rho = random_density(2, seed=rng)
        errs.append(abs(qcd_bruteforce(rho, 1.0) - qcd(rho).total))
    return _result("qcd_bruteforce_agreement", errs, 1e-3)


def check_metric_consistency(rng, count):
    errs = []
    for i in range(count):
        m = 2 + i % 2
        s = random_pure_state(m, rng)
        dirs = _random_unit(rng, m)
        errs.append(np.max(np.abs(metric_mixed(s.density(), dirs).entries - fs_metric(s, dirs).entries)))
    return _result("metric_pure_consistency", errs, 1e-10)


def check_bd_closed_form(rng, count, basis):
    errs = []
    for _ in range(count):
        w = oracles.random_bd_weights(rng)
        errs.append(abs(qcd(_bd(w, basis)).total - oracles.bd_qcd(w)))
    return _result("bd_closed_form", errs, 1e-10)


def check_werner_closed_form(rng, count, basis):
    errs = []
    for p in np.linspace(0, 1, 21):
        errs.append(abs(qcd(_bd(oracles.werner_weights(p), basis)).total - oracles.werner_qcd(p)))
    return _result("werner_qcd_closed_form", errs, 1e-10)


def check_bd_ppt(rng, count, basis):
    errs = []
    for _ in range(count):
        w = oracles.random_bd_weights(rng)
        if abs(w.max() - 0.5) < 1e-9:
            continue
        rho = _bd(w, basis)
        by_ppt = oracles.is_ppt(rho, 0)
        by_octa = oracles.in_octahedron(oracles.c_from_rho(rho))
        by_weight = w.max() <= 0.5
        errs.append(0.0 if by_ppt == by_octa == by_weight else 1.0)
    return _result("bd_ppt_octahedron_weights", errs, 0.0)


def check_concurrence_lu(rng, count):
    errs = []
    for _ in range(count):
        rho = random_density(2, seed=rng)
        u = random_local_unitary(2, rng)
        rot = u @ rho.matrix @ u.conj().T
        errs.append(abs(oracles.concurrence(make_density(0.5 * (rot + rot.conj().T))) - oracles.concurrence(rho)))
    return _result("concurrence_lu_invariance", errs, 1e-10)


def check_werner_ed(rng, count, basis):
    opts = OptimizerOptions(restarts=4, seed=int(rng.integers(2**31)))
    errs = []
    for p in (0.0, 0.25, 0.75):
        errs.append(abs(ed(_bd(oracles.werner_weights(p), basis), opts).total - oracles.werner_ed(p)))
    return _result("werner_ed_closed_form", errs, 1e-3)


def check_ed_dominance(rng, count):
    opts = OptimizerOptions(restarts=1, seed=int(rng.integers(2**31)))
    errs = []
    for _ in range(max(2, count // 10)):
        rho = random_density(2, seed=rng)
        errs.append(max(0.0, ed(rho, opts).report.raw_total - qcd(rho).total))
    return _result("ed_below_qcd", errs, 1e-6)


_PLAIN = (
    check_pauli_algebra,
    check_hs_triangle,
    check_pure_lu_invariance,
    check_pure_minimality,
    check_pure_reduction,
    check_classical_nullity,
    check_qcd_lu_invariance,
    check_bruteforce,
    check_metric_consistency,
    check_concurrence_lu,
    check_ed_dominance,
)
_BD = (check_bd_closed_form, check_werner_closed_form, check_bd_ppt, check_werner_ed)


def run_checks(seed: int = 0, count: int = 20, bell_vectors=None) -> list[CheckResult]:
    basis = oracles.bell_basis() if bell_vectors is None else np.asarray(bell_vectors, dtype=complex)
    streams = np.random.default_rng(seed).spawn(len(_PLAIN) + len(_BD))
    results = [check(rng, count) for check, rng in zip(_PLAIN, streams)]
    results += [check(rng, count, basis) for check, rng in zip(_BD, streams[len(_PLAIN) :])]
    return results


def report(results: list[CheckResult], seed: int, count: int) -> dict:
    return {
        "seed": seed,
        "count": count,
        "passed": all(r.passed for r in results),
        "checks": [asdict(r) for r in results],
    }
