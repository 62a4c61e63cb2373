import numpy as np
import pytest

from grmsim.basis import BareLabel, BasisSpec, ModeBasisSpec, bare_state_vector
from grmsim.models import (
    JunctionParams,
    ModelParams,
    build_grm,
    build_grm_rwa,
    build_hopping_only,
    build_junction,
    parity_operator,
)
from grmsim.spectrum import eigendecompose

CELL = BasisSpec(1, 8)


def params(omega_c=1 / 3, lam=0.0, kappa=0.0):
    return ModelParams(omega_c=omega_c, lam=lam, kappa=kappa)


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(omega_c=0.0, lam=0.1, kappa=0.0)
    with pytest.raises(ValueError):
        ModelParams(omega_c=0.5, lam=0.1, kappa=0.0, omega_a=2.0)


def test_uncoupled_spectrum_is_bare_ladder():
    h = build_grm(params(omega_c=1 / 3), CELL)
    res = eigendecompose(h)
    expected = np.sort(
        np.concatenate(
            [-0.5 + np.arange(9) / 3, 0.5 + np.arange(9) / 3]
        )
    )
    assert np.allclose(res.eigenvalues, expected, atol=1e-14)


def test_grm_coupling_matrix_elements():
    lam, kappa = 0.07, 0.03
    h = build_grm(params(lam=lam, kappa=kappa), CELL).matrix
    g = lambda m: bare_state_vector(BareLabel(0, "g", m), CELL)
    e = lambda m: bare_state_vector(BareLabel(0, "e", m), CELL)
    assert np.vdot(e(0), h @ g(1)) == pytest.approx(lam, abs=0)
    assert np.vdot(e(2), h @ g(1)) == pytest.approx(lam * np.sqrt(2), rel=1e-15)
    assert np.vdot(e(0), h @ g(2)) == pytest.approx(kappa * np.sqrt(2), rel=1e-15)
    assert np.vdot(e(4), h @ g(2)) == pytest.approx(kappa * np.sqrt(12), rel=1e-15)
    # diagonal: bare energies untouched by the coupling
    assert np.vdot(g(2), h @ g(2)) == pytest.approx(-0.5 + 2 / 3, rel=1e-15)


def test_rwa_keeps_only_excitation_conserving_elements():
    lam, kappa = 0.07, 0.03
    h = build_grm_rwa(params(lam=lam, kappa=kappa), CELL).matrix
    g = lambda m: bare_state_vector(BareLabel(0, "g", m), CELL)
    e = lambda m: bare_state_vector(BareLabel(0, "e", m), CELL)
    assert np.vdot(e(0), h @ g(1)) == pytest.approx(lam, abs=0)
    assert np.vdot(e(0), h @ g(2)) == pytest.approx(kappa * np.sqrt(2), rel=1e-15)
    # counter-rotating elements vanish identically
    assert np.vdot(e(2), h @ g(1)) == 0.0
    assert np.vdot(e(4), h @ g(2)) == 0.0


def test_rwa_with_kappa_zero_conserves_excitation_number():
    h = build_grm_rwa(params(lam=0.2), CELL).matrix
    n_exc = np.kron(np.diag([0.0, 1.0]), np.eye(9)) + np.kron(
        np.eye(2), np.diag(np.arange(9.0))
    )
    assert np.abs(h @ n_exc - n_exc @ h).max() == 0.0


@pytest.mark.parametrize("builder", [build_grm, build_grm_rwa])
def test_cell_hermiticity_is_exact(builder):
    h = builder(params(lam=0.11, kappa=0.04), CELL).matrix
    assert np.abs(h - h.conj().T).max() == 0.0


def test_cell_builders_reject_multi_site_basis():
    with pytest.raises(ValueError):
        build_grm(params(), BasisSpec(3, 4))


@pytest.mark.parametrize(
    "lam,kappa,seed", [(0.05, 0.02, 0), (0.3, 0.1, 1), (0.8, 0.25, 2)]
)
def test_spectrum_invariant_under_coupling_sign_flips(lam, kappa, seed):
    # lam -> -lam and kappa -> -kappa are basis changes (photon parity and
    # a -> ia rotations), so the spectrum cannot depend on either sign
    base = eigendecompose(build_grm(params(lam=lam, kappa=kappa), CELL)).eigenvalues
    for lam2, kappa2 in [(-lam, kappa), (lam, -kappa), (-lam, -kappa)]:
        flipped = eigendecompose(
            build_grm(params(lam=lam2, kappa=kappa2), CELL)
        ).eigenvalues
        assert np.allclose(base, flipped, atol=1e-13)


def test_parity_z2_eigenvalues_and_commutation():
    pi1 = parity_operator("Z2", CELL)
    assert pi1.hermitian
    d = np.diag(pi1.matrix)
    assert d[CELL.index_of(BareLabel(0, "g", 0))] == 1.0
    assert d[CELL.index_of(BareLabel(0, "g", 3))] == -1.0
    assert d[CELL.index_of(BareLabel(0, "e", 3))] == 1.0
    # commutes with the one-photon coupling, broken by the two-photon one
    h1 = build_grm(params(lam=0.2), CELL).matrix
    assert np.abs(h1 @ pi1.matrix - pi1.matrix @ h1).max() < 1e-13
    h2 = build_grm(params(lam=0.2, kappa=0.1), CELL).matrix
    assert np.abs(h2 @ pi1.matrix - pi1.matrix @ h2).max() > 1e-3


def test_parity_z4_eigenvalues_and_commutation():
    pi2 = parity_operator("Z4", CELL)
    assert not pi2.hermitian
    d = np.diag(pi2.matrix)
    assert d[CELL.index_of(BareLabel(0, "g", 0))] == 1
    assert d[CELL.index_of(BareLabel(0, "g", 1))] == 1j
    assert d[CELL.index_of(BareLabel(0, "g", 2))] == -1
    assert d[CELL.index_of(BareLabel(0, "e", 0))] == -1
    assert d[CELL.index_of(BareLabel(0, "e", 1))] == -1j
    # unitary: diagonal phases
    assert np.allclose(np.abs(d), 1.0, atol=0)
    h2 = build_grm(params(kappa=0.15), CELL).matrix
    assert np.abs(h2 @ pi2.matrix - pi2.matrix @ h2).max() < 1e-13
    h12 = build_grm(params(lam=0.1, kappa=0.15), CELL).matrix
    assert np.abs(h12 @ pi2.matrix - pi2.matrix @ h12).max() > 1e-3


def test_parity_rejects_unknown_kind():
    with pytest.raises(ValueError):
        parity_operator("Z3", CELL)


JUNCTION = BasisSpec(3, 3)


def jparams(J=0.02, theta=np.pi / 6, lam=0.05, kappa=0.01, rwa=False):
    return JunctionParams(
        cell=ModelParams(omega_c=0.26, lam=lam, kappa=kappa),
        J=J,
        theta=theta,
        rwa=rwa,
    )


def test_junction_hermiticity_is_exact():
    h = build_junction(jparams(), JUNCTION).matrix
    assert np.abs(h - h.conj().T).max() == 0.0


def test_junction_requires_three_sites():
    with pytest.raises(ValueError):
        build_junction(jparams(), BasisSpec(1, 3))


def test_junction_with_no_hopping_is_sum_of_cells():
    h = build_junction(jparams(J=0.0), JUNCTION).matrix
    cell = build_grm(jparams().cell, BasisSpec(1, 3)).matrix
    eye = np.eye(8)
    expected = (
        np.kron(cell, np.kron(eye, eye))
        + np.kron(eye, np.kron(cell, eye))
        + np.kron(eye, np.kron(eye, cell))
    )
    assert np.abs(h - expected).max() == 0.0


def test_junction_rwa_flag_switches_cell_hamiltonian():
    h = build_junction(jparams(J=0.0, rwa=True), JUNCTION).matrix
    cell = build_grm_rwa(jparams().cell, BasisSpec(1, 3)).matrix
    eye = np.eye(8)
    expected = (
        np.kron(cell, np.kron(eye, eye))
        + np.kron(eye, np.kron(cell, eye))
        + np.kron(eye, np.kron(eye, cell))
    )
    assert np.abs(h - expected).max() == 0.0


def test_junction_theta_zero_is_real():
    h = build_junction(jparams(theta=0.0), JUNCTION).matrix
    assert np.abs(h.imag).max() == 0.0


def test_hopping_only_single_photon_band_structure():
    # single-photon block diagonalizes into eps_k = omega_c + 2J cos(theta + 2pi k/3)
    J, theta, omega_c = 0.013, np.pi / 6, 0.26
    mb = ModeBasisSpec(3, 2)
    jp = JunctionParams(
        cell=ModelParams(omega_c=omega_c, lam=0.0, kappa=0.0), J=J, theta=theta
    )
    h = build_hopping_only(jp, mb).matrix
    one_photon = [mb.index_of(occ) for occ in ([1, 0, 0], [0, 1, 0], [0, 0, 1])]
    block = h[np.ix_(one_photon, one_photon)]
    got = np.sort(np.linalg.eigvalsh(block))
    expected = np.sort(omega_c + 2 * J * np.cos(theta + 2 * np.pi * np.arange(3) / 3))
    assert np.allclose(got, expected, atol=1e-15)
    # theta = pi/6 makes the bands omega_c + {-sqrt3 J, 0, +sqrt3 J}
    assert np.allclose(
        got, omega_c + np.array([-np.sqrt(3) * J, 0.0, np.sqrt(3) * J]), atol=1e-15
    )


def test_hopping_only_requires_mode_basis():
    with pytest.raises(ValueError):
        build_hopping_only(jparams(), BasisSpec(3, 2))


def test_junction_params_validation():
    with pytest.raises(ValueError):
        JunctionParams(cell=ModelParams(omega_c=0.25, lam=0, kappa=0), J=-1.0, theta=0.0)
