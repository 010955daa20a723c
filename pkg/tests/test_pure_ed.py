import numpy as np
import pytest

from conftest import ghz3, ket, w_state
from entdist.oracles import bell_state
from entdist.pure_ed import block_partition, fs_metric, optimal_directions, pure_ed, trace_g
from entdist.qstate import make_pure, random_local_unitary, random_pure_state

Z, X = (0, 0, 1), (1, 0, 0)


def _product(m, rng):
    amps = np.array([1.0 + 0j])
    for _ in range(m):
        amps = np.kron(amps, random_pure_state(1, rng).amplitudes)
    return make_pure(amps)


def _dirs(rng, m):
    v = rng.normal(size=(m, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


class TestFsMetric:
    def test_product_basis_state_zero(self):
        g = fs_metric(make_pure(ket("00")), [Z, Z])
        np.testing.assert_allclose(g.entries, 0, atol=1e-12)

    def test_bell_zz(self, psi_plus):
        np.testing.assert_allclose(fs_metric(psi_plus, [Z, Z]).entries, [[1, 1], [1, 1]], atol=1e-12)

    def test_product_off_diagonal_vanishes(self, rng):
        for _ in range(10):
            s = _product(3, rng)
            dirs = _dirs(rng, 3)
            g = fs_metric(s, dirs).entries
            assert np.max(np.abs(g - np.diag(np.diag(g)))) < 1e-12

    def test_invariants(self, rng):
        for _ in range(20):
            s = random_pure_state(3, rng)
            g = fs_metric(s, _dirs(rng, 3)).entries
            assert np.max(np.abs(g - g.T)) < 1e-10
            assert np.all(np.diag(g) > -1e-10) and np.all(np.diag(g) < 1 + 1e-10)
            assert np.linalg.eigvalsh(g).min() > -1e-8

    def test_wrong_direction_count(self, psi_plus):
        with pytest.raises(ValueError, match="expected 2 directions"):
            fs_metric(psi_plus, [Z])


class TestTraceG:
    def test_bell_any_direction(self, psi_plus, rng):
        for _ in range(5):
            assert trace_g(psi_plus, _dirs(rng, 2)) == pytest.approx(2, abs=1e-12)

    def test_product_aligned(self):
        assert trace_g(make_pure(ket("00")), [Z, Z]) == pytest.approx(0, abs=1e-12)

    def test_product_orthogonal(self):
        assert trace_g(make_pure(ket("00")), [X, X]) == pytest.approx(2, abs=1e-12)

    def test_matches_metric_trace(self, rng):
        for m in (2, 3, 4):
            s = random_pure_state(m, rng)
            dirs = _dirs(rng, m)
            assert trace_g(s, dirs) == pytest.approx(fs_metric(s, dirs).trace, abs=1e-10)


class TestOptimalDirections:
    def test_product(self):
        choice = optimal_directions(make_pure(ket("00")))
        np.testing.assert_allclose(choice.directions, [Z, Z], atol=1e-12)
        assert choice.degenerate == (False, False)

    def test_bell_flagged(self, psi_plus):
        choice = optimal_directions(psi_plus)
        assert choice.degenerate == (True, True)
        np.testing.assert_array_equal(choice.directions[0], Z)

    def test_w_state(self):
        choice = optimal_directions(make_pure(w_state()))
        np.testing.assert_allclose(choice.directions, [Z, Z, Z], atol=1e-12)
        assert not any(choice.degenerate)


class TestPureEd:
    @pytest.mark.parametrize("label", ["psi+", "psi-", "phi+", "phi-"])
    def test_bell(self, label):
        assert pure_ed(bell_state(label)) == pytest.approx(2, abs=1e-12)

    def test_product(self, rng):
        for m in (1, 2, 4):
            assert pure_ed(_product(m, rng)) == pytest.approx(0, abs=1e-12)

    def test_ghz3(self):
        assert pure_ed(make_pure(ghz3())) == pytest.approx(3, abs=1e-12)

    def test_w3(self):
        # each qubit has Bloch vector (0, 0, 1/3): 3 - 3/9
        assert pure_ed(make_pure(w_state())) == pytest.approx(8 / 3, abs=1e-12)

    def test_equals_trace_at_optimum(self, rng):
        for m in (2, 3, 4):
            s = random_pure_state(m, rng)
            assert pure_ed(s) == pytest.approx(trace_g(s, optimal_directions(s).directions), abs=1e-10)

    def test_lu_invariance(self, rng):
        for i in range(30):
            m = 2 + i % 3
            s = random_pure_state(m, rng)
            u = random_local_unitary(m, rng)
            assert abs(pure_ed(make_pure(u @ s.amplitudes)) - pure_ed(s)) < 1e-10

    def test_minimality_and_range(self, rng):
        for i in range(10):
            m = 2 + i % 3
            s = random_pure_state(m, rng)
            e = pure_ed(s)
            assert -1e-12 <= e <= m + 1e-12
            for _ in range(100):
                assert trace_g(s, _dirs(rng, m)) >= e - 1e-10


class TestBlockPartition:
    def test_bell_times_product(self, psi_plus):
        s = make_pure(np.kron(psi_plus.amplitudes, ket("0")))
        assert block_partition(fs_metric(s, [Z, Z, Z])).blocks == ((0, 1), (2,))

    def test_product(self):
        assert block_partition(fs_metric(make_pure(ket("000")), [Z, Z, Z])).blocks == ((0,), (1,), (2,))

    def test_ghz(self):
        part = block_partition(fs_metric(make_pure(ghz3()), [Z, Z, Z]))
        assert part.blocks == ((0, 1, 2),)
        assert part.irreducible

    def test_tolerance_is_configurable(self, psi_plus):
        g = fs_metric(psi_plus, [Z, Z])
        assert block_partition(g, zero_tol=2.0).blocks == ((0,), (1,))
