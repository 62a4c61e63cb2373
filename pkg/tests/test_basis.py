import numpy as np
import pytest

from grmsim.basis import (
    BareLabel,
    BasisSpec,
    ModeBasisSpec,
    OperatorMatrix,
    annihilation_matrix,
    bare_state_vector,
    fock_state_vector,
    site_operator,
)


def test_annihilation_matrix_small_cases():
    a1 = annihilation_matrix(1).matrix
    assert np.array_equal(a1, [[0.0, 1.0], [0.0, 0.0]])
    a3 = annihilation_matrix(3).matrix
    assert a3.shape == (4, 4)
    assert a3[0, 1] == 1.0
    assert a3[1, 2] == pytest.approx(np.sqrt(2), abs=0)
    assert a3[2, 3] == pytest.approx(np.sqrt(3), abs=0)
    assert np.count_nonzero(a3) == 3


def test_annihilation_matrix_is_real_with_exact_transpose_dagger():
    a = annihilation_matrix(6).matrix
    assert np.isrealobj(a)
    assert np.array_equal(a.conj().T, a.T)


def test_annihilation_matrix_rejects_bad_cutoff():
    with pytest.raises(ValueError):
        annihilation_matrix(0)


def test_ladder_commutator_is_identity_below_truncation_row():
    # [a, a^dag] = 1 except in the top Fock state, where truncation bites
    N = 5
    a = annihilation_matrix(N).matrix
    comm = a @ a.T - a.T @ a
    assert np.allclose(comm[:N, :N], np.eye(N), atol=1e-14)
    assert comm[N, N] == pytest.approx(-N, abs=1e-12)


@pytest.mark.parametrize("n_sites", [1, 3])
@pytest.mark.parametrize("cutoff", [1, 2, 4])
def test_index_label_round_trip_is_a_bijection(n_sites, cutoff):
    basis = BasisSpec(n_sites, cutoff)
    seen = set()
    for idx in range(basis.dim):
        labels = basis.labels_of(idx)
        assert len(labels) == n_sites
        assert basis.index_of(labels) == idx
        seen.add(labels)
    assert len(seen) == basis.dim


def test_single_site_ordering_is_atom_major():
    basis = BasisSpec(1, 3)
    assert basis.index_of(BareLabel(0, "g", 0)) == 0
    assert basis.index_of(BareLabel(0, "g", 3)) == 3
    assert basis.index_of(BareLabel(0, "e", 0)) == 4
    assert basis.index_of(BareLabel(0, "e", 2)) == 6


def test_multi_site_ordering_is_site_major():
    basis = BasisSpec(3, 1)
    # site 0 most significant: |e,1>|g,0>|g,0> sits at 3*4*4
    labels = [BareLabel(0, "e", 1), BareLabel(1, "g", 0), BareLabel(2, "g", 0)]
    assert basis.index_of(labels) == 48
    # labels may come in any order
    assert basis.index_of(list(reversed(labels))) == 48


def test_index_of_rejects_incomplete_or_overfull_labels():
    basis = BasisSpec(3, 2)
    with pytest.raises(ValueError):
        basis.index_of([BareLabel(0, "g", 0)])
    with pytest.raises(ValueError):
        basis.index_of([BareLabel(s, "g", 0) for s in (0, 1, 1)])
    with pytest.raises(ValueError):
        basis.index_of(
            [BareLabel(0, "g", 3), BareLabel(1, "g", 0), BareLabel(2, "g", 0)]
        )


def test_occupations_and_excitations_match_labels():
    basis = BasisSpec(3, 2)
    photons = basis.occupations()
    excit = basis.excitations()
    for idx in (0, 7, 100, basis.dim - 1):
        labels = basis.labels_of(idx)
        for j, lab in enumerate(labels):
            assert photons[j, idx] == lab.photons
            assert excit[j, idx] == lab.atom_index


def test_bare_label_validation():
    with pytest.raises(ValueError):
        BareLabel(0, "x", 0)
    with pytest.raises(ValueError):
        BareLabel(0, "g", -1)
    with pytest.raises(ValueError):
        BareLabel(-1, "g", 0)


def test_bare_state_vector_is_unit_basis_vector():
    basis = BasisSpec(1, 4)
    psi = bare_state_vector(BareLabel(0, "e", 2), basis)
    assert psi.dtype == complex
    assert np.linalg.norm(psi) == 1.0
    assert psi[basis.index_of(BareLabel(0, "e", 2))] == 1.0
    assert np.count_nonzero(psi) == 1


def test_site_operator_embeds_number_operator():
    basis = BasisSpec(3, 4)
    n_local = np.kron(np.eye(2), np.diag(np.arange(5.0)))
    n1 = site_operator(n_local, 1, basis).matrix
    psi = bare_state_vector(
        [BareLabel(0, "g", 0), BareLabel(1, "g", 3), BareLabel(2, "e", 1)], basis
    )
    assert np.vdot(psi, n1 @ psi) == pytest.approx(3.0, abs=1e-14)


def test_site_operators_on_different_sites_commute():
    basis = BasisSpec(3, 2)
    a_local = np.kron(np.eye(2), annihilation_matrix(2).matrix)
    a0 = site_operator(a_local, 0, basis).matrix
    a2dag = site_operator(a_local.T, 2, basis).matrix
    assert np.abs(a0 @ a2dag - a2dag @ a0).max() == 0.0


def test_site_operator_validates_site_and_shape():
    basis = BasisSpec(2, 2)
    a_local = np.kron(np.eye(2), annihilation_matrix(2).matrix)
    with pytest.raises(ValueError):
        site_operator(a_local, 2, basis)
    with pytest.raises(ValueError):
        site_operator(np.eye(3), 0, basis)


def test_mode_basis_round_trip_and_vectors():
    mb = ModeBasisSpec(3, 2)
    assert mb.dim == 27
    assert mb.index_of([1, 0, 2]) == 1 * 9 + 0 * 3 + 2
    psi = fock_state_vector([1, 0, 2], mb)
    assert psi[11] == 1.0 and np.count_nonzero(psi) == 1
    occ = mb.occupations()
    assert occ[0, 11] == 1 and occ[1, 11] == 0 and occ[2, 11] == 2
    assert mb.excitations() is None


def test_operator_matrix_validates_hermitian_flag():
    good = np.array([[0.0, 1.0j], [-1.0j, 2.0]])
    OperatorMatrix(good, hermitian=True)
    bad = np.array([[0.0, 1.0j], [1.0j, 2.0]])
    with pytest.raises(ValueError):
        OperatorMatrix(bad, hermitian=True)


def test_operator_matrix_validates_basis_dimension():
    with pytest.raises(ValueError):
        OperatorMatrix(np.eye(3), basis=BasisSpec(1, 2))
