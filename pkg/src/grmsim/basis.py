"""Bare product bases and operator embeddings for coupled atom-photon sites.

Conventions
-----------
* Each site carries a two-level atom (g -> 0, e -> 1) and a photon mode
  truncated at ``photon_cutoff`` (Fock states 0..N), so a single site has
  dimension 2*(N+1); the site-local index is atom-major,
  ``idx = atom*(N+1) + photons``.
* Multi-site indices are site-major (site 0 most significant), matching the
  ordering produced by ``kron(site0, kron(site1, ...))``.
* All energies are measured in units of the atom frequency omega_a, so time
  is measured in units of 1/omega_a throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

ATOM_STATES = ("g", "e")


@dataclass(frozen=True)
class BareLabel:
    """One site's bare state: atom level and photon number."""

    site: int
    atom: str
    photons: int

    def __post_init__(self):
        if self.site < 0:
            raise ValueError(f"site must be non-negative, got {self.site}")
        if self.atom not in ATOM_STATES:
            raise ValueError(f"atom must be 'g' or 'e', got {self.atom!r}")
        if self.photons < 0:
            raise ValueError(f"photons must be non-negative, got {self.photons}")

    @property
    def atom_index(self) -> int:
        return ATOM_STATES.index(self.atom)


@dataclass(frozen=True)
class BasisSpec:
    """Truncated product basis for ``n_sites`` atom-photon sites."""

    n_sites: int
    photon_cutoff: int

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        if self.photon_cutoff < 1:
            raise ValueError(
                f"photon_cutoff must be >= 1, got {self.photon_cutoff}"
            )

    @property
    def site_dim(self) -> int:
        return 2 * (self.photon_cutoff + 1)

    @property
    def dim(self) -> int:
        return self.site_dim**self.n_sites

    def index_of(self, labels: BareLabel | Sequence[BareLabel]) -> int:
        """Composite index of a bare product state.

        ``labels`` must contain exactly one label per site (any order).
        """
        if isinstance(labels, BareLabel):
            labels = [labels]
        by_site = {lab.site: lab for lab in labels}
        if sorted(by_site) != list(range(self.n_sites)):
            raise ValueError(
                f"need one label per site 0..{self.n_sites - 1}, "
                f"got sites {sorted(lab.site for lab in labels)}"
            )
        idx = 0
        for site in range(self.n_sites):
            lab = by_site[site]
            if lab.photons > self.photon_cutoff:
                raise ValueError(
                    f"photons={lab.photons} exceeds cutoff {self.photon_cutoff}"
                )
            idx = idx * self.site_dim + lab.atom_index * (self.photon_cutoff + 1) + lab.photons
        return idx

    def labels_of(self, index: int) -> tuple[BareLabel, ...]:
        """Inverse of :meth:`index_of`."""
        if not 0 <= index < self.dim:
            raise ValueError(f"index {index} outside basis of dimension {self.dim}")
        out = []
        for site in reversed(range(self.n_sites)):
            index, site_idx = divmod(index, self.site_dim)
            atom, photons = divmod(site_idx, self.photon_cutoff + 1)
            out.append(BareLabel(site, ATOM_STATES[atom], photons))
        return tuple(reversed(out))

    def occupations(self) -> np.ndarray:
        """Photon number of every basis state, shape (n_sites, dim)."""
        idx = np.arange(self.dim)
        site_idx = (idx[None, :] // self.site_dim ** np.arange(self.n_sites - 1, -1, -1)[:, None]) % self.site_dim
        return site_idx % (self.photon_cutoff + 1)

    def excitations(self) -> np.ndarray:
        """Atom excitation (0 or 1) of every basis state, shape (n_sites, dim)."""
        idx = np.arange(self.dim)
        site_idx = (idx[None, :] // self.site_dim ** np.arange(self.n_sites - 1, -1, -1)[:, None]) % self.site_dim
        return site_idx // (self.photon_cutoff + 1)


@dataclass(frozen=True)
class ModeBasisSpec:
    """Photon-only product basis (no atoms), used for hopping-only models."""

    n_sites: int
    photon_cutoff: int

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        if self.photon_cutoff < 1:
            raise ValueError(
                f"photon_cutoff must be >= 1, got {self.photon_cutoff}"
            )

    @property
    def site_dim(self) -> int:
        return self.photon_cutoff + 1

    @property
    def dim(self) -> int:
        return self.site_dim**self.n_sites

    def index_of(self, occupations: Sequence[int]) -> int:
        if len(occupations) != self.n_sites:
            raise ValueError(
                f"need {self.n_sites} occupation numbers, got {len(occupations)}"
            )
        idx = 0
        for n in occupations:
            if not 0 <= n <= self.photon_cutoff:
                raise ValueError(f"occupation {n} outside 0..{self.photon_cutoff}")
            idx = idx * self.site_dim + n
        return idx

    def occupations(self) -> np.ndarray:
        idx = np.arange(self.dim)
        return (idx[None, :] // self.site_dim ** np.arange(self.n_sites - 1, -1, -1)[:, None]) % self.site_dim

    def excitations(self) -> None:
        return None


@dataclass
class OperatorMatrix:
    """Dense operator together with the basis it acts on.

    ``basis`` is None for site-local building blocks (e.g. the bare ladder
    operator) that have not been embedded into a composite basis yet.
    The ``hermitian`` flag is validated on construction: builders in this
    package assemble Hamiltonians as sums of exactly Hermitian pairs, so the
    defect must vanish to rounding.
    """

    matrix: np.ndarray
    basis: BasisSpec | ModeBasisSpec | None = None
    hermitian: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        if self.basis is not None and m.shape[0] != self.basis.dim:
            raise ValueError(
                f"operator dimension {m.shape[0]} does not match basis "
                f"dimension {self.basis.dim}"
            )
        if self.hermitian:
            defect = np.abs(m - m.conj().T).max()
            scale = max(1.0, np.abs(m).max())
            if defect > 1e-14 * scale:
                raise ValueError(
                    f"hermitian flag set but max|M - M^dag| = {defect:.3e}"
                )
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def annihilation_matrix(cutoff: int) -> OperatorMatrix:
    """Photon annihilation operator on a single truncated mode.

    Real (cutoff+1) x (cutoff+1) matrix with sqrt(1..cutoff) on the first
    superdiagonal; the creation operator is its exact transpose.
    """
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    return OperatorMatrix(np.diag(np.sqrt(np.arange(1.0, cutoff + 1)), 1))


def site_operator(
    local_op: OperatorMatrix | np.ndarray,
    site: int,
    basis: BasisSpec | ModeBasisSpec,
) -> OperatorMatrix:
    """Embed a site-local operator into the composite basis via kron with
    identities on all other sites."""
    m = local_op.matrix if isinstance(local_op, OperatorMatrix) else np.asarray(local_op)
    if not 0 <= site < basis.n_sites:
        raise ValueError(f"site {site} outside 0..{basis.n_sites - 1}")
    if m.shape != (basis.site_dim, basis.site_dim):
        raise ValueError(
            f"local operator shape {m.shape} does not match site dimension "
            f"{basis.site_dim}"
        )
    out = np.eye(1, dtype=m.dtype)
    for j in range(basis.n_sites):
        out = np.kron(out, m if j == site else np.eye(basis.site_dim, dtype=m.dtype))
    return OperatorMatrix(out, basis=basis)


def bare_state_vector(
    labels: BareLabel | Sequence[BareLabel], basis: BasisSpec
) -> np.ndarray:
    """Unit vector of a bare product state in the composite basis."""
    psi = np.zeros(basis.dim, dtype=complex)
    psi[basis.index_of(labels)] = 1.0
    return psi


def fock_state_vector(occupations: Sequence[int], basis: ModeBasisSpec) -> np.ndarray:
    """Unit vector of a photon-number product state (mode basis)."""
    psi = np.zeros(basis.dim, dtype=complex)
    psi[basis.index_of(occupations)] = 1.0
    return psi
