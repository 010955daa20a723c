import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entdist import oracles
from entdist.oracles import (
    bd_concurrence,
    bd_from_c,
    bd_qcd,
    bd_state,
    bell_basis,
    bell_state,
    c_from_rho,
    c_from_weights,
    concurrence,
    in_octahedron,
    in_tetrahedron,
    is_ppt,
    ppt_min_eigenvalue,
    random_bd_weights,
    werner_ed,
    werner_qcd,
    werner_state,
    werner_weights,
)
from entdist.qcd import qcd
from entdist.qstate import make_density, purity, random_density, random_local_unitary

S = 1 / np.sqrt(2)

simplex = st.lists(st.floats(0, 1, allow_nan=False), min_size=4, max_size=4).filter(
    lambda v: sum(v) > 1e-3
).map(lambda v: np.array(v) / sum(v))


class TestBell:
    def test_psi_plus(self):
        np.testing.assert_allclose(bell_state("psi+").amplitudes, [S, 0, 0, S], atol=1e-15)

    def test_phi_minus(self):
        np.testing.assert_allclose(bell_state("phi-").amplitudes, [0, S, -S, 0], atol=1e-15)

    def test_unicode_alias(self):
        np.testing.assert_array_equal(bell_state("φ−").amplitudes, bell_state("phi-").amplitudes)

    def test_orthonormal(self):
        b = bell_basis()
        np.testing.assert_allclose(b.conj().T @ b, np.eye(4), atol=1e-15)

    def test_unknown(self):
        with pytest.raises(ValueError):
            bell_state("chi+")

    def test_correlation_table(self):
        for label, c in zip(oracles.BELL_LABELS, oracles.BELL_CORRELATIONS):
            np.testing.assert_allclose(c_from_rho(bell_state(label).density()), c, atol=1e-15)


class TestBdState:
    def test_uniform(self):
        rho = bd_state([0.25] * 4)
        np.testing.assert_allclose(rho.matrix, np.eye(4) / 4, atol=1e-15)
        np.testing.assert_allclose(c_from_rho(rho), 0, atol=1e-15)

    def test_vertex(self, psi_plus):
        np.testing.assert_allclose(bd_state([1, 0, 0, 0]).matrix, psi_plus.projector(), atol=1e-15)

    def test_axis_is_classical(self):
        assert qcd(bd_from_c([0.5, 0, 0])).total == pytest.approx(0, abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(simplex)
    def test_round_trip(self, w):
        rho = bd_state(w)
        c = c_from_rho(rho)
        np.testing.assert_allclose(c, c_from_weights(w), atol=1e-12)
        np.testing.assert_allclose(bd_from_c(c).matrix, rho.matrix, atol=1e-12)

    def test_rejects_off_simplex(self):
        with pytest.raises(ValueError):
            bd_state([0.5, 0.5, 0.5, -0.5])

    def test_rejects_outside_tetrahedron(self):
        assert not in_tetrahedron([1, 1, 1])
        with pytest.raises(ValueError):
            bd_from_c([1, 1, 1])


class TestBdQcd:
    def test_vertex(self):
        assert bd_qcd([1, 0, 0, 0]) == pytest.approx(2)

    def test_two_bell_mixture(self):
        assert bd_qcd([0.5, 0.5, 0, 0]) == pytest.approx(0, abs=1e-15)

    @pytest.mark.parametrize("p", np.linspace(0, 1, 11))
    def test_werner_reduction(self, p):
        assert bd_qcd(werner_weights(p)) == pytest.approx(2 * (1 - 4 * p / 3) ** 2, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(simplex)
    def test_matches_general(self, w):
        assert qcd(bd_state(w)).total == pytest.approx(bd_qcd(w), abs=1e-10)


class TestWerner:
    def test_p0_is_bell(self):
        np.testing.assert_allclose(werner_state(0).matrix, bell_state("phi-").projector(), atol=1e-15)

    def test_three_quarters_maximally_mixed(self):
        np.testing.assert_allclose(werner_state(0.75).matrix, np.eye(4) / 4, atol=1e-15)

    def test_p1(self):
        assert purity(werner_state(1)) == pytest.approx(1 / 3, abs=1e-12)

    def test_closed_forms(self):
        assert werner_qcd(0.75) == pytest.approx(0, abs=1e-15)
        assert werner_ed(0.75) == 0
        assert werner_ed(0) == 2
        assert werner_qcd(0.3) == pytest.approx(0.72)
        assert werner_ed(0.3) == pytest.approx(0.32)
        assert werner_ed(0.5) == 0

    def test_out_of_range(self):
        for f in (werner_state, werner_qcd, werner_ed):
            with pytest.raises(ValueError):
                f(1.2)

    @pytest.mark.parametrize("p", np.linspace(0, 1, 21))
    def test_qcd_grid(self, p):
        assert qcd(werner_state(p)).total == pytest.approx(werner_qcd(p), abs=1e-10)


class TestConcurrence:
    def test_bell(self, psi_plus):
        assert concurrence(psi_plus.density()) == pytest.approx(1, abs=1e-7)

    def test_maximally_mixed(self):
        assert concurrence(np.eye(4) / 4) == pytest.approx(0, abs=1e-12)

    @pytest.mark.parametrize("p", np.linspace(0, 1, 11))
    def test_werner(self, p):
        assert concurrence(werner_state(p)) == pytest.approx(max(0, 1 - 2 * p), abs=1e-7)

    def test_bd_formula(self, rng):
        for _ in range(20):
            w = random_bd_weights(rng)
            assert concurrence(bd_state(w)) == pytest.approx(bd_concurrence(w), abs=1e-7)

    def test_lu_invariance(self, rng):
        for _ in range(20):
            rho = random_density(2, seed=rng)
            u = random_local_unitary(2, rng)
            rot = u @ rho.matrix @ u.conj().T
            assert abs(concurrence(make_density(0.5 * (rot + rot.conj().T))) - concurrence(rho)) < 1e-10

    def test_two_qubits_only(self):
        with pytest.raises(ValueError):
            concurrence(np.eye(8) / 8)


class TestPpt:
    def test_bell(self, psi_plus):
        assert ppt_min_eigenvalue(psi_plus.density(), 0) == pytest.approx(-0.5)
        assert not is_ppt(psi_plus.density())

    def test_maximally_mixed(self):
        assert ppt_min_eigenvalue(np.eye(4) / 4, 0) == pytest.approx(0.25)
        assert is_ppt(np.eye(4) / 4)

    @pytest.mark.parametrize("p", [0.0, 0.2, 0.45, 0.5, 0.55, 0.8, 1.0])
    def test_werner(self, p):
        assert is_ppt(werner_state(p)) == (p >= 0.5)

    def test_index_range(self):
        with pytest.raises(IndexError):
            ppt_min_eigenvalue(np.eye(4) / 4, 2)

    def test_octahedron_matches_ppt(self, rng):
        checked = 0
        for _ in range(300):
            w = random_bd_weights(rng)
            if abs(w.max() - 0.5) < 1e-9:
                continue
            rho = bd_state(w)
            by_ppt = is_ppt(rho)
            assert by_ppt == in_octahedron(c_from_rho(rho)) == (w.max() <= 0.5)
            checked += 1
        assert checked > 250

    def test_octahedron_vertices(self):
        assert in_octahedron([1, 0, 0]) and in_octahedron([0, 0, -1])
        assert not in_octahedron([0.5, 0.5, 0.1])


def test_classical_states_zero(rng):
    for m in (2, 3):
        assert qcd(oracles.random_classical_state(m, rng)).total == pytest.approx(0, abs=1e-10)


def test_bd_decomposition_drops_zeros():
    d = oracles.bd_decomposition([0.5, 0, 0.5, 0])
    assert d.labels == ("psi+", "phi+")
    np.testing.assert_allclose(d.reconstruct(), bd_state([0.5, 0, 0.5, 0]).matrix, atol=1e-15)
