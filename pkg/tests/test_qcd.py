import numpy as np
import pytest

from conftest import ket
from entdist.oracles import bell_state, random_classical_state, werner_state
from entdist.pure_ed import fs_metric, pure_ed
from entdist.qcd import (
    AsymmetryTooLarge,
    correlation_matrix,
    metric_mixed,
    qcd,
    qcd_bruteforce,
    qcd_qubit,
    sphere_grid,
)
from entdist.qstate import (
    DensityMatrix,
    local_paulis,
    make_density,
    random_density,
    random_local_unitary,
    random_pure_state,
    rotation,
    sigma_along,
)

Z = (0, 0, 1)


def _dirs(rng, m):
    v = rng.normal(size=(m, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


class TestCorrelationMatrix:
    def test_product(self):
        a = correlation_matrix(np.diag([1.0, 0, 0, 0]), 0).entries
        np.testing.assert_allclose(a, np.diag([0, 0, 1]), atol=1e-12)

    def test_maximally_mixed(self):
        for mu in (0, 1):
            np.testing.assert_allclose(correlation_matrix(np.eye(4) / 4, mu).entries, np.eye(3) / 4, atol=1e-12)

    def test_bell(self, psi_plus):
        np.testing.assert_allclose(correlation_matrix(psi_plus.density(), 0).entries, 0, atol=1e-12)

    def test_invariants(self, rng):
        for _ in range(20):
            rho = random_density(3, seed=rng)
            for mu in range(3):
                a = correlation_matrix(rho, mu).entries
                lam = np.linalg.eigvalsh(a)
                assert lam.min() > -1e-10
                assert lam.max() <= np.sum(np.abs(rho.matrix) ** 2) + 1e-10

    def test_corrupted_input_rejected(self):
        # bypass validation to hand in a non-Hermitian matrix
        bad = DensityMatrix(1, np.array([[0.5, 0.3], [0.0, 0.5]], dtype=complex))
        with pytest.raises(AsymmetryTooLarge):
            correlation_matrix(bad, 0)


class TestQcd:
    def test_werner_zero(self):
        assert qcd(werner_state(0)).total == pytest.approx(2, abs=1e-12)

    def test_werner_three_quarters(self):
        assert qcd(werner_state(0.75)).total == pytest.approx(0, abs=1e-12)

    def test_classical_on_one_qubit(self, rng):
        # sum_j p_j rho_j (x) |j><j| with arbitrary rho_j on qubit 0
        a, b = random_density(1, seed=rng).matrix, random_density(1, seed=rng).matrix
        rho = 0.3 * np.kron(a, np.diag([1, 0])) + 0.7 * np.kron(b, np.diag([0, 1]))
        assert qcd_qubit(rho, 1) == pytest.approx(0, abs=1e-12)

    def test_classical_states(self, rng):
        for m in (2, 3):
            for _ in range(10):
                assert abs(qcd(random_classical_state(m, rng)).total) < 1e-10

    def test_pure_reduction(self, rng):
        for m in (2, 3, 4):
            for _ in range(10):
                s = random_pure_state(m, rng)
                assert qcd(s.density()).total == pytest.approx(pure_ed(s), abs=1e-10)

    def test_result_invariants(self, rng):
        for _ in range(20):
            rho = random_density(2, seed=rng)
            res = qcd(rho)
            assert res.total == pytest.approx(sum(res.values), abs=1e-12)
            for mu, q in enumerate(res.per_qubit):
                assert q.value == pytest.approx(res.purity - q.lambda_max, abs=1e-12)
                assert q.value >= -1e-10
                a = correlation_matrix(rho, mu)
                assert q.direction @ a.entries @ q.direction == pytest.approx(q.lambda_max, abs=1e-12)

    def test_lu_invariance(self, rng):
        for i in range(30):
            m = 2 + i % 2
            rho = random_density(m, seed=rng)
            u = random_local_unitary(m, rng)
            rot = u @ rho.matrix @ u.conj().T
            assert abs(qcd(make_density(0.5 * (rot + rot.conj().T))).total - qcd(rho).total) < 1e-9

    def test_low_rank_nonnegative(self, rng):
        for rank in (1, 2, 3):
            for _ in range(10):
                assert qcd(random_density(3, rank=rank, seed=rng)).total >= -1e-10


class TestBruteForce:
    def test_grid_bound(self, rng):
        res = 1.0
        bound = 2 * (1 - np.cos(np.deg2rad(res)))
        for _ in range(5):
            rho = random_density(2, seed=rng)
            diff = qcd_bruteforce(rho, res) - qcd(rho).total
            assert -1e-12 <= diff <= bound * 4

    def test_werner_point_three(self):
        assert qcd_bruteforce(werner_state(0.3), 2.0) == pytest.approx(0.72, abs=1e-3)

    def test_maximally_mixed(self):
        assert qcd_bruteforce(np.eye(4) / 4, 5.0) == pytest.approx(0, abs=1e-12)

    def test_resolution_floor(self):
        with pytest.raises(ValueError):
            sphere_grid(0.25)


class TestMetricMixed:
    def test_bell_projector(self, psi_plus):
        g = metric_mixed(psi_plus.density(), [Z, Z]).entries
        np.testing.assert_allclose(g, fs_metric(psi_plus, [Z, Z]).entries, atol=1e-10)
        np.testing.assert_allclose(g, [[1, 1], [1, 1]], atol=1e-10)

    def test_maximally_mixed_diagonal_zero(self, rng):
        g = metric_mixed(np.eye(4) / 4, _dirs(rng, 2)).entries
        np.testing.assert_allclose(np.diag(g), 0, atol=1e-12)

    def test_pure_consistency(self, rng):
        for i in range(20):
            m = 2 + i % 2
            s = random_pure_state(m, rng)
            dirs = _dirs(rng, m)
            np.testing.assert_allclose(
                metric_mixed(s.density(), dirs).entries, fs_metric(s, dirs).entries, atol=1e-10
            )

    def test_trace_identity(self, rng):
        for _ in range(10):
            rho = random_density(3, seed=rng)
            dirs = _dirs(rng, 3)
            g = metric_mixed(rho, dirs)
            want = 3 * np.sum(np.abs(rho.matrix) ** 2) - sum(
                correlation_matrix(rho, mu).quadratic(dirs[mu]) for mu in range(3)
            )
            assert g.trace == pytest.approx(want, abs=1e-10)

    def test_finite_difference(self, rng):
        xi = 1e-3
        for i in range(20):
            m = 2 + i % 2
            rho = random_density(m, seed=rng)
            dirs = _dirs(rng, m)
            angles = rng.normal(size=m)
            g = metric_mixed(rho, dirs).entries
            want = xi**2 * angles @ g @ angles
            # central difference of exp(-i xi G) rho exp(i xi G): error O(xi^3)
            gen = sum(angles[mu] * sigma_along(m, mu, dirs[mu]) for mu in range(m))
            ev, vec = np.linalg.eigh(gen)
            u_plus = (vec * np.exp(-1j * xi * ev)) @ vec.conj().T
            r = rho.matrix
            drho = 0.5 * (u_plus @ r @ u_plus.conj().T - u_plus.conj().T @ r @ u_plus)
            got = 0.5 * np.real(np.trace(drho.conj().T @ drho))
            assert abs(got - want) / abs(want) < 1e-4


def test_local_rotation_convention():
    # R_z(phi) sends sigma_x to cos(phi) sigma_x + sin(phi) sigma_y
    u = rotation(3, 0.4)
    sx, sy, _ = local_paulis(1, 0)
    np.testing.assert_allclose(u @ sx @ u.conj().T, np.cos(0.4) * sx + np.sin(0.4) * sy, atol=1e-14)


def test_bell_states_total_two():
    for label in ("psi+", "psi-", "phi+", "phi-"):
        assert qcd(bell_state(label).density()).total == pytest.approx(2, abs=1e-12)


def test_product_basis_state_zero():
    assert qcd(np.outer(ket("01"), ket("01"))).total == pytest.approx(0, abs=1e-12)
