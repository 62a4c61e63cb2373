"""Spectral time evolution, junction experiments, and transfer diagnostics.

Evolution is exact within the truncated basis: one dense Hermitian
eigendecomposition, then psi(t) = V exp(-i Lambda t) V^dag psi(0) evaluated
in batches over the requested sample times. All tracked observables
(per-site photon number, atom excitation, bare-state amplitudes) are either
diagonal in the bare basis or single components of psi, so the cost is one
matrix-vector product per batch of samples.

Timescale conventions (units of 1/omega_a): a single photon circulates the
ring in t_H = 2 pi/(3 sqrt3 J) per site-to-site step, with full period
T_H = 3 t_H; a multiphoton Rabi cycle |g,n> -> |e,0> -> |g,n> takes
T_R = 2 t_R = pi/|Omega_eff|. Their ratio mu = t_R/t_H controls which
process dominates a junction.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.signal import find_peaks

from .basis import BareLabel, BasisSpec, ModeBasisSpec, OperatorMatrix, bare_state_vector
from .models import JunctionParams, build_junction
from .perturbation import ResonanceSpec, effective_coupling, resonant_frequency
from .spectrum import eigendecompose

#: Per-mode population allowed in the top two Fock levels of a final state.
TAIL_THRESHOLD = 1e-2

#: Trajectory sampling floors: samples per hopping period and per Rabi period.
SAMPLES_PER_T_HOP = 400
SAMPLES_PER_T_RABI = 40


class CutoffError(RuntimeError):
    """The evolved state touches the truncation boundary; rerun with a
    larger photon cutoff."""


class HorizonError(ValueError):
    """The trajectory is too short for the requested diagnostic."""


@dataclass(frozen=True)
class Timescales:
    """Hopping and Rabi timescales of a junction run. mu is defined as the
    ratio t_R/t_H; 3 sqrt3 J / (4 |Omega_eff|) equals it identically."""

    t_H: float
    T_H: float
    t_R: float
    T_R: float
    mu: float

    @classmethod
    def from_couplings(cls, J: float, omega_eff: float) -> "Timescales":
        if J <= 0 or omega_eff == 0:
            raise ValueError("J and omega_eff must be nonzero to set timescales")
        t_hop = 2 * np.pi / (3 * np.sqrt(3.0) * J)
        t_rabi = np.pi / (2 * abs(omega_eff))
        return cls(
            t_H=t_hop,
            T_H=3 * t_hop,
            t_R=t_rabi,
            T_R=2 * t_rabi,
            mu=t_rabi / t_hop,
        )


def hopping_from_mu(mu: float, omega_eff: float) -> float:
    """Invert mu = t_R/t_H: J = 4 mu |Omega_eff| / (3 sqrt3)."""
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    return 4 * mu * abs(omega_eff) / (3 * np.sqrt(3.0))


@dataclass
class Trajectory:
    """Sampled observables of one evolution.

    ``bare_amplitudes`` maps a tracked bare product state (one
    (atom, photons) pair per site, or an occupation tuple for mode bases) to
    the complex amplitudes <bare|psi(t)>; ``bare_overlaps`` are their squared
    magnitudes. Energy is sampled via explicit H@psi products at
    ``energy_times`` rather than trusting the eigenbasis, so conservation is
    a real check of the propagation.
    """

    times: np.ndarray
    photon_expect: np.ndarray
    qubit_expect: np.ndarray | None
    norm: np.ndarray
    energy_times: np.ndarray
    energy_expect: np.ndarray
    basis: BasisSpec | ModeBasisSpec
    bare_amplitudes: dict = field(default_factory=dict)
    psi_final: np.ndarray | None = None
    timescales: Timescales | None = None
    meta: dict = field(default_factory=dict)

    @property
    def bare_overlaps(self) -> dict:
        return {k: np.abs(v) ** 2 for k, v in self.bare_amplitudes.items()}

    @property
    def total_photons(self) -> np.ndarray:
        return self.photon_expect.sum(axis=0)


def _amplitude_key(basis, state) -> tuple:
    """Normalize a tracked-state spec to a hashable key (and sanity check)."""
    if isinstance(basis, ModeBasisSpec):
        key = tuple(int(n) for n in state)
        basis.index_of(key)
        return key
    if isinstance(state, BareLabel):
        state = [state]
    labels = sorted(state, key=lambda lab: lab.site)
    basis.index_of(labels)
    return tuple((lab.atom, lab.photons) for lab in labels)


def _state_index(basis, key) -> int:
    if isinstance(basis, ModeBasisSpec):
        return basis.index_of(key)
    labels = [
        BareLabel(site, atom, photons) for site, (atom, photons) in enumerate(key)
    ]
    return basis.index_of(labels)


def evolve(
    op: OperatorMatrix,
    psi0: np.ndarray,
    times: np.ndarray,
    track: Sequence | None = None,
    energy_samples: int = 16,
    batch: int = 400,
) -> Trajectory:
    """Evolve psi0 under a Hermitian operator and sample observables.

    ``track`` lists bare product states whose complex amplitudes are
    recorded (sequences of BareLabel, or occupation tuples for mode bases).
    ``energy_samples`` explicit <H> evaluations are spread over the times.
    """
    if not op.hermitian:
        raise ValueError("evolve requires an operator flagged hermitian")
    if op.basis is None:
        raise ValueError("evolve requires an operator carrying its basis")
    basis = op.basis
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (op.dim,):
        raise ValueError(f"psi0 shape {psi0.shape} does not match dim {op.dim}")
    nrm = np.linalg.norm(psi0)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"psi0 must be normalized, got |psi0| = {nrm!r}")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("times must be a non-empty 1-d array")
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be non-decreasing")

    track_keys = [_amplitude_key(basis, s) for s in (track or [])]
    track_idx = np.array(
        [_state_index(basis, k) for k in track_keys], dtype=int
    )

    spec = eigendecompose(op)
    w, v = spec.eigenvalues, spec.eigenvectors
    c0 = v.conj().T @ psi0

    photons = basis.occupations()
    excit = basis.excitations()
    n_t = len(times)
    photon_expect = np.zeros((basis.n_sites, n_t))
    qubit_expect = None if excit is None else np.zeros((basis.n_sites, n_t))
    norm = np.zeros(n_t)
    amps = np.zeros((len(track_keys), n_t), dtype=complex)
    psi_final = None
    for s in range(0, n_t, batch):
        tc = times[s : s + batch]
        psi = v @ (c0[:, None] * np.exp(-1j * np.outer(w, tc)))
        p = np.abs(psi) ** 2
        norm[s : s + batch] = p.sum(axis=0)
        for j in range(basis.n_sites):
            photon_expect[j, s : s + batch] = photons[j] @ p
            if excit is not None:
                qubit_expect[j, s : s + batch] = excit[j] @ p
        if len(track_idx):
            amps[:, s : s + batch] = psi[track_idx, :]
        if s + batch >= n_t:
            psi_final = psi[:, -1].copy()

    e_idx = np.unique(np.linspace(0, n_t - 1, min(energy_samples, n_t)).astype(int))
    energy = np.empty(len(e_idx))
    for k, i in enumerate(e_idx):
        psi = v @ (c0 * np.exp(-1j * w * times[i]))
        energy[k] = np.real(np.vdot(psi, op.matrix @ psi))

    return Trajectory(
        times=times,
        photon_expect=photon_expect,
        qubit_expect=qubit_expect,
        norm=norm,
        energy_times=times[e_idx],
        energy_expect=energy,
        basis=basis,
        bare_amplitudes=dict(zip(track_keys, amps)),
        psi_final=psi_final,
    )


def norm_tail(psi: np.ndarray, basis, levels: int = 2) -> np.ndarray:
    """Per-mode population within the top ``levels`` Fock levels."""
    p = np.abs(np.asarray(psi)) ** 2
    photons = basis.occupations()
    edge = basis.photon_cutoff - levels + 1
    return np.array([p[photons[j] >= edge].sum() for j in range(basis.n_sites)])


def junction_experiment(
    params: JunctionParams,
    spec: ResonanceSpec,
    mu: float,
    horizon: float = 10.0,
    samples: int | None = None,
    cutoff: int = 8,
) -> Trajectory:
    """Evolve |g, n>|g, 0>|g, 0> through a junction tuned to the resonance.

    ``params`` supplies the cell couplings, hopping phase, and the RWA
    switch; the drive frequency and hopping strength are derived here:
    omega_c is set to the closed-form resonance omega_c'(lam, kap) and
    J = 4 mu |Omega_eff|/(3 sqrt3), with Omega_eff always taken from the
    full-model closed form (so an RWA run is the same experiment with the
    counter-rotating terms dropped, which is what makes the comparison
    meaningful). ``horizon`` is in units of T_H. The resolved parameters
    are recorded in Trajectory.meta.

    Raises CutoffError if the final state puts more than TAIL_THRESHOLD
    population in any mode's top two Fock levels.
    """
    if spec.n0 != 0:
        raise ValueError("junction experiments are defined for n0 = 0 resonances")
    if spec.rwa:
        raise ValueError(
            "pass rwa through JunctionParams; the resonance itself is always "
            "defined by the full model"
        )
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if cutoff <= spec.n:
        raise ValueError(
            f"cutoff {cutoff} cannot hold the initial {spec.n}-photon state "
            "away from the truncation boundary"
        )
    lam, kappa = params.cell.lam, params.cell.kappa
    omega_eff = effective_coupling(spec, lam, kappa)
    if omega_eff == 0.0:
        raise ValueError(
            "effective coupling vanishes for these parameters; mu is undefined"
        )
    omega_res = resonant_frequency(spec, lam, kappa)
    J = hopping_from_mu(mu, omega_eff)
    scales = Timescales.from_couplings(J, omega_eff)
    resolved = replace(
        params, cell=replace(params.cell, omega_c=omega_res), J=J
    )
    basis = BasisSpec(3, cutoff)
    h = build_junction(resolved, basis)

    initial = [
        BareLabel(0, "g", spec.n),
        BareLabel(1, "g", 0),
        BareLabel(2, "g", 0),
    ]
    final_target = [
        BareLabel(0, "e", 0),
        BareLabel(1, "g", 0),
        BareLabel(2, "g", 0),
    ]
    psi0 = bare_state_vector(initial, basis)
    if samples is None:
        rate = max(
            SAMPLES_PER_T_HOP,
            int(np.ceil(SAMPLES_PER_T_RABI * scales.T_H / scales.T_R)),
        )
        samples = int(np.ceil(horizon * rate)) + 1
    times = np.linspace(0.0, horizon * scales.T_H, samples)

    traj = evolve(h, psi0, times, track=[initial, final_target])
    tails = norm_tail(traj.psi_final, basis)
    if tails.max() > TAIL_THRESHOLD:
        raise CutoffError(
            f"final state has per-mode tail populations {tails} in the top "
            f"two Fock levels (threshold {TAIL_THRESHOLD:g}); increase the "
            f"cutoff (currently {cutoff})"
        )
    traj.timescales = scales
    traj.meta = {
        "resolved_params": resolved,
        "spec": spec,
        "mu": mu,
        "cutoff": cutoff,
        "omega_eff": omega_eff,
    }
    return traj


def rabi_fidelity(traj: Trajectory, spec: ResonanceSpec, omega_eff: float) -> float:
    """Minimum overlap, over the first Rabi period, with the two-level model

        |phi(t)> = cos(Omega t)|g, n> - i sin(Omega t)|e, 0>

    (site-1 states, all other sites in vacuum). ``omega_eff`` is the signed
    coupling; for the negative closed forms this is the usual
    cos + i sin form. Requires the trajectory to have tracked both bare
    amplitudes and to cover at least one Rabi period.
    """
    if omega_eff == 0:
        raise ValueError("omega_eff must be nonzero")
    basis = traj.basis
    if isinstance(basis, ModeBasisSpec):
        raise ValueError("rabi_fidelity needs an atom-photon trajectory")
    rest = [("g", 0)] * (basis.n_sites - 1)
    key_i = tuple([("g", spec.n0 + spec.n)] + rest)
    key_f = tuple([("e", spec.n0)] + rest)
    try:
        a_i = traj.bare_amplitudes[key_i]
        a_f = traj.bare_amplitudes[key_f]
    except KeyError as exc:
        raise ValueError(
            f"trajectory did not track the bare amplitude {exc}; pass both "
            "resonance states via evolve(..., track=...)"
        ) from None
    t_rabi_period = np.pi / abs(omega_eff)
    if traj.times[-1] < t_rabi_period * (1 - 1e-12):
        raise HorizonError(
            f"trajectory ends at t={traj.times[-1]:.6g}, before one Rabi "
            f"period {t_rabi_period:.6g}"
        )
    mask = traj.times <= t_rabi_period
    phase = omega_eff * traj.times[mask]
    fidelity = np.abs(np.cos(phase) * a_i[mask] + 1j * np.sin(phase) * a_f[mask]) ** 2
    return float(fidelity.min())


@dataclass
class ChiralityReport:
    """Transfer direction over one window: 'forward' (site 0 -> 1 -> 2),
    'backward', or 'none' when a neighbor never peaks above threshold."""

    direction: str
    first_peak_times: tuple
    threshold: float
    window: tuple[float, float]


def chirality_diagnostic(
    traj: Trajectory,
    threshold: float | None = None,
    window: tuple[float, float] | None = None,
) -> ChiralityReport:
    """Direction of photon circulation within one hopping period.

    Finds each site's first photon-number peak above ``threshold`` (default:
    half the initial total photon number) inside ``window`` (default: the
    first hopping period, requiring trajectory timescales; errors if the
    trajectory is shorter than T_H).
    """
    if traj.basis.n_sites != 3:
        raise ValueError("chirality is defined for 3-site trajectories")
    if window is None:
        if traj.timescales is None:
            raise ValueError(
                "no window given and no timescales attached to the trajectory"
            )
        window = (traj.times[0], traj.times[0] + traj.timescales.T_H)
    if traj.times[-1] < window[1] * (1 - 1e-12):
        raise HorizonError(
            f"trajectory ends at t={traj.times[-1]:.6g}, before the window "
            f"end {window[1]:.6g}"
        )
    if threshold is None:
        threshold = 0.5 * float(traj.total_photons[0])
    mask = (traj.times >= window[0]) & (traj.times <= window[1])
    t_win = traj.times[mask]
    peak_times = []
    for j in range(3):
        n_j = traj.photon_expect[j, mask]
        peaks, _ = find_peaks(n_j, height=threshold)
        peak_times.append(float(t_win[peaks[0]]) if len(peaks) else None)
    t1, t2 = peak_times[1], peak_times[2]
    if t1 is None or t2 is None:
        direction = "none"
    elif t1 < t2:
        direction = "forward"
    else:
        direction = "backward"
    return ChiralityReport(
        direction=direction,
        first_peak_times=tuple(peak_times),
        threshold=threshold,
        window=window,
    )


@dataclass
class TransitionReport:
    """Sliding-window chirality record. first_failure is the start time of
    the first full period whose direction differs from the first window's
    (None while chirality persists to the end of the horizon)."""

    first_failure: float | None
    window_starts: np.ndarray
    directions: list[str]
    reference: str


def chirality_transition_report(
    traj: Trajectory,
    threshold: float | None = None,
    step: float | None = None,
) -> TransitionReport:
    """Scan successive hopping periods for loss of chiral transfer.

    Windows have width T_H and start every ``step`` (default T_H, i.e.
    aligned, consecutive periods; misaligned windows see a cyclic transfer
    mid-cycle and flag spurious direction flips). The threshold is fixed
    from the initial photon number for all windows, so decaying transfer
    eventually reports 'none'.
    """
    if traj.timescales is None:
        raise ValueError("transition report requires trajectory timescales")
    T_H = traj.timescales.T_H
    if step is None:
        step = T_H
    if threshold is None:
        threshold = 0.5 * float(traj.total_photons[0])
    starts = []
    t0 = traj.times[0]
    while t0 + T_H <= traj.times[-1] * (1 + 1e-12):
        starts.append(t0)
        t0 += step
    if not starts:
        raise HorizonError("trajectory shorter than one hopping period")
    directions = [
        chirality_diagnostic(traj, threshold=threshold, window=(s, s + T_H)).direction
        for s in starts
    ]
    reference = directions[0]
    first_failure = None
    for s, d in zip(starts, directions):
        if d != reference or reference == "none":
            first_failure = float(s)
            break
    return TransitionReport(
        first_failure=first_failure,
        window_starts=np.array(starts),
        directions=directions,
        reference=reference,
    )


def count_excitation_peaks(
    traj: Trajectory,
    site: int = 0,
    t_max: float | None = None,
    height: float = 0.4,
    prominence: float = 0.2,
) -> int:
    """Number of Rabi peaks in one site's atom excitation up to t_max."""
    if traj.qubit_expect is None:
        raise ValueError("trajectory has no atom excitations (mode basis)")
    mask = slice(None) if t_max is None else traj.times <= t_max
    q = traj.qubit_expect[site, mask]
    peaks, _ = find_peaks(q, height=height, prominence=prominence)
    return int(len(peaks))
