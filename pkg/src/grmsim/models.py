"""Hamiltonian builders for the generalized Rabi model and three-site junctions.

Model
-----
A single cell couples a two-level atom (transition frequency omega_a = 1,
the unit of energy) to one photon mode of frequency omega_c:

    H_cell = (omega_a/2) sigma_z + omega_c a^dag a
             + lam (a + a^dag) sigma_x + kap (a^2 + a^dag^2) sigma_x ,

i.e. the usual Rabi model plus a two-photon coupling of strength kap.
The RWA variant keeps only the excitation-conserving part,
lam (a sigma^+ + a^dag sigma^-) + kap (a^2 sigma^+ + a^dag^2 sigma^-).

A junction couples three cells on a ring through a phased photon hop,

    H = sum_j H_cell^(j) + J sum_j (e^{-i theta} a_{j+1}^dag a_j + h.c.) ,

site indices cyclic mod 3. A nonzero theta breaks time-reversal symmetry;
at theta = pi/6 the single-photon transfer is maximally chiral with
transfer order site 0 -> site 1 -> site 2.

Symmetries
----------
With kap = 0 the cell conserves the Z2 parity
Pi_1 = exp[i pi ((1+sigma_z)/2 + a^dag a)]; with lam = 0 it conserves the Z4
parity Pi_2 = exp[i pi ((1+sigma_z)/2 + a^dag a / 2)]. Both are diagonal in
the bare basis used here.

All builders assemble the matrix from exactly Hermitian pairs, so the
Hermiticity defect of every returned operator is exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .basis import BasisSpec, ModeBasisSpec, OperatorMatrix, annihilation_matrix

SIGMA_Z = np.diag([-1.0, 1.0])           # g -> -1, e -> +1
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]])   # |e><g|


@dataclass(frozen=True)
class ModelParams:
    """Single-cell parameters, all in units of the atom frequency."""

    omega_c: float
    lam: float
    kappa: float
    omega_a: float = 1.0

    def __post_init__(self):
        if self.omega_a != 1.0:
            raise ValueError(
                "omega_a is the unit of energy and must be 1.0; rescale the "
                "other parameters instead"
            )
        if not self.omega_c > 0:
            raise ValueError(f"omega_c must be positive, got {self.omega_c}")
        for name in ("lam", "kappa"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class JunctionParams:
    """Three-cell ring: identical cells plus a phased photon hop."""

    cell: ModelParams
    J: float
    theta: float
    rwa: bool = False

    def __post_init__(self):
        if self.J < 0:
            raise ValueError(f"J must be non-negative, got {self.J}")
        if not np.isfinite(self.theta):
            raise ValueError("theta must be finite")


def _check_single_site(basis: BasisSpec):
    if not isinstance(basis, BasisSpec) or basis.n_sites != 1:
        raise ValueError("expected a single-site atom-photon basis")


def _kron_chain(ops) -> np.ndarray:
    return reduce(np.kron, ops)


def build_grm(params: ModelParams, basis: BasisSpec) -> OperatorMatrix:
    """Generalized Rabi Hamiltonian for one cell."""
    _check_single_site(basis)
    N = basis.photon_cutoff
    a = annihilation_matrix(N).matrix
    number = np.diag(np.arange(N + 1, dtype=float))
    a2 = a @ a
    h = 0.5 * params.omega_a * np.kron(SIGMA_Z, np.eye(N + 1))
    h = h + params.omega_c * np.kron(np.eye(2), number)
    h = h + params.lam * np.kron(SIGMA_X, a + a.T)
    h = h + params.kappa * np.kron(SIGMA_X, a2 + a2.T)
    return OperatorMatrix(h.astype(complex), basis=basis, hermitian=True)


def build_grm_rwa(params: ModelParams, basis: BasisSpec) -> OperatorMatrix:
    """RWA variant: counter-rotating couplings dropped."""
    _check_single_site(basis)
    N = basis.photon_cutoff
    a = annihilation_matrix(N).matrix
    number = np.diag(np.arange(N + 1, dtype=float))
    h = 0.5 * params.omega_a * np.kron(SIGMA_Z, np.eye(N + 1))
    h = h + params.omega_c * np.kron(np.eye(2), number)
    k = params.lam * np.kron(SIGMA_PLUS, a) + params.kappa * np.kron(SIGMA_PLUS, a @ a)
    h = h + k + k.T
    return OperatorMatrix(h.astype(complex), basis=basis, hermitian=True)


def parity_operator(kind: str, basis: BasisSpec) -> OperatorMatrix:
    """Parity operator of a single cell, diagonal in the bare basis.

    kind="Z2": Pi_1 with eigenvalues (-1)^(n+q); commutes with the cell
    Hamiltonian when kap = 0.
    kind="Z4": Pi_2 with eigenvalues (-1)^q * i^n; commutes when lam = 0.
    (q = atom excitation, n = photon number.)
    """
    _check_single_site(basis)
    photons = basis.occupations()[0]
    excit = basis.excitations()[0]
    if kind == "Z2":
        vals = (-1.0) ** (photons + excit)
        hermitian = True
    elif kind == "Z4":
        i_pow = np.array([1, 1j, -1, -1j])  # exact i^n, no complex power rounding
        vals = ((-1.0) ** excit) * i_pow[photons % 4]
        hermitian = False
    else:
        raise ValueError(f"kind must be 'Z2' or 'Z4', got {kind!r}")
    return OperatorMatrix(np.diag(vals.astype(complex)), basis=basis, hermitian=hermitian)


def build_junction(params: JunctionParams, basis: BasisSpec) -> OperatorMatrix:
    """Three coupled gRM cells with phased photon hopping."""
    if not isinstance(basis, BasisSpec) or basis.n_sites != 3:
        raise ValueError("junction requires a 3-site atom-photon basis")
    cell_basis = BasisSpec(1, basis.photon_cutoff)
    build = build_grm_rwa if params.rwa else build_grm
    h_cell = build(params.cell, cell_basis).matrix
    eye = np.eye(basis.site_dim)
    h = np.zeros((basis.dim, basis.dim), dtype=complex)
    for j in range(3):
        h += _kron_chain([h_cell if k == j else eye for k in range(3)])
    a_site = np.kron(np.eye(2), annihilation_matrix(basis.photon_cutoff).matrix)
    hop = params.J * np.exp(-1j * params.theta)
    for j in range(3):
        ops = [eye, eye, eye]
        ops[(j + 1) % 3] = a_site.T
        ops[j] = a_site
        m = hop * _kron_chain(ops)
        h += m
        h += m.conj().T
    return OperatorMatrix(h, basis=basis, hermitian=True)


def build_hopping_only(params: JunctionParams, basis: ModeBasisSpec) -> OperatorMatrix:
    """The junction with the atoms removed: three bare modes plus hopping.

    Diagonalizes exactly into hopping bands eps_k = omega_c + 2J cos(theta
    + 2 pi k/3); useful as an analytic reference for the chiral transfer.
    """
    if not isinstance(basis, ModeBasisSpec) or basis.n_sites != 3:
        raise ValueError("hopping-only model requires a 3-site mode basis")
    a = annihilation_matrix(basis.photon_cutoff).matrix
    number = np.diag(np.arange(basis.photon_cutoff + 1, dtype=float))
    eye = np.eye(basis.site_dim)
    h = np.zeros((basis.dim, basis.dim), dtype=complex)
    for j in range(3):
        h += params.cell.omega_c * _kron_chain(
            [number if k == j else eye for k in range(3)]
        )
    hop = params.J * np.exp(-1j * params.theta)
    for j in range(3):
        ops = [eye, eye, eye]
        ops[(j + 1) % 3] = a.T
        ops[j] = a
        m = hop * _kron_chain(ops)
        h += m
        h += m.conj().T
    return OperatorMatrix(h, basis=basis, hermitian=True)
