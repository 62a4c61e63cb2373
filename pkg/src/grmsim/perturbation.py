"""Third-order perturbation theory for multiphoton resonances.

Near omega_c = omega_a/n (n = 3..6) the bare pair |g, n0+n> and |e, n0> is
almost degenerate and connected at third order in the couplings through two
intermediate states, producing an avoided crossing of splitting
Delta = 2|Omega_eff|. This module provides:

* exact rational coefficients and closed forms for the shifted resonance
  frequency omega_c'(lam, kap),
* closed-form effective couplings Omega_eff for n = 3..6 at n0 = 0,
* second-order Stark shifts of individual bare levels (exact finite sums),
* a direct path-sum evaluation of Omega_eff that enumerates every
  third-order path through the coupling operator; it serves as an
  independent oracle for the closed forms and works for any n0.

Sign convention: the closed-form couplings are negative (the path
denominators at omega_c = omega_a/n all conspire to a common sign);
splittings are always reported as 2|Omega_eff|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from .basis import BareLabel
from .models import ModelParams

#: Denominators smaller than this are treated as accidental degeneracies.
EPS_DEGENERATE = 1e-6

RESONANCE_ORDERS = (3, 4, 5, 6)


class DegenerateDenominatorError(ValueError):
    """A perturbative denominator |E_ref - E_intermediate| fell below
    EPS_DEGENERATE, so the sum is not trustworthy at this omega_c."""


@dataclass(frozen=True)
class ResonanceSpec:
    """Which multiphoton resonance: |g, n0+n> <-> |e, n0> near omega_c = 1/n."""

    n: int
    n0: int = 0
    rwa: bool = False

    def __post_init__(self):
        if self.n not in RESONANCE_ORDERS:
            raise ValueError(f"n must be one of {RESONANCE_ORDERS}, got {self.n}")
        if self.n0 < 0:
            raise ValueError(f"n0 must be non-negative, got {self.n0}")
        if self.rwa and self.n != 3:
            raise ValueError(
                "under the RWA only the three-photon resonance survives; "
                f"got rwa=True with n={self.n}"
            )

    @property
    def initial(self) -> BareLabel:
        return BareLabel(0, "g", self.n0 + self.n)

    @property
    def final(self) -> BareLabel:
        return BareLabel(0, "e", self.n0)


@dataclass(frozen=True)
class ResonanceResult:
    """A located resonance: frequency, coupling (if signed value is known),
    and splitting. ``method`` records how it was obtained."""

    omega_c_res: float
    omega_eff: float | None
    delta: float
    method: str

    def __post_init__(self):
        if self.method not in ("closed_form", "path_sum", "numeric_scan"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.omega_eff is not None and not np.isclose(
            self.delta, 2 * abs(self.omega_eff), rtol=1e-12, atol=0
        ):
            raise ValueError("delta must equal 2|omega_eff|")


def bare_energy(atom: str, photons: int, omega_c: float) -> float:
    """E = -1/2 + m omega_c for |g, m>, +1/2 + m omega_c for |e, m>."""
    return (-0.5 if atom == "g" else 0.5) + photons * omega_c


def coupling_elements(
    atom: str, photons: int, lam: float, kappa: float, rwa: bool = False
) -> list[tuple[tuple[str, int], float]]:
    """Nonzero matrix elements <b|V|a> for a = (atom, photons).

    V is the full coupling lam (a + a^dag) sigma_x + kap (a^2 + a^dag^2)
    sigma_x, or its excitation-conserving part under the RWA. Returned as
    [((atom_b, photons_b), element), ...]; V is real symmetric so the same
    list gives <a|V|b>.
    """
    m = photons
    other = "e" if atom == "g" else "g"
    if not rwa:
        candidates = [
            (m - 1, lam * sqrt(m)),
            (m + 1, lam * sqrt(m + 1)),
            (m - 2, kappa * sqrt(m * (m - 1))),
            (m + 2, kappa * sqrt((m + 1) * (m + 2))),
        ]
    elif atom == "g":
        candidates = [
            (m - 1, lam * sqrt(m)),
            (m - 2, kappa * sqrt(m * (m - 1))),
        ]
    else:
        candidates = [
            (m + 1, lam * sqrt(m + 1)),
            (m + 2, kappa * sqrt((m + 1) * (m + 2))),
        ]
    return [
        ((other, mb), amp) for mb, amp in candidates if mb >= 0 and amp != 0.0
    ]


def frequency_coefficients(spec: ResonanceSpec) -> tuple[Fraction, Fraction]:
    """Exact rational coefficients (c_lam, c_kap) in
    omega_c'/omega_a = 1/n + c_lam lam^2 + c_kap kap^2."""
    n, n0 = spec.n, spec.n0
    if spec.rwa:
        return Fraction(n0 + 2), Fraction(2 * (n0 + 2) ** 2)
    c_lam = Fraction(2 * n * (2 * n0 + n + 1), n * n - 1)
    c_kap = Fraction(
        2 * n * (n0 * n0 + (n0 + n) ** 2 + 2 * n0 + n - 2), n * n - 4
    )
    return c_lam, c_kap


def resonant_frequency(spec: ResonanceSpec, lam: float, kappa: float) -> float:
    """Closed-form shifted resonance frequency omega_c'/omega_a."""
    c_lam, c_kap = frequency_coefficients(spec)
    return 1.0 / spec.n + float(c_lam) * lam**2 + float(c_kap) * kappa**2


def effective_coupling(spec: ResonanceSpec, lam: float, kappa: float) -> float:
    """Closed-form Omega_eff/omega_a at n0 = 0 (negative by convention).

    Only the lowest resonance of each order has a closed form here; use
    path_sum_coupling for n0 > 0.
    """
    if spec.n0 != 0:
        raise ValueError(
            f"closed-form coupling is only available for n0=0, got n0={spec.n0}"
        )
    if spec.rwa:
        return -18.0 * sqrt(6.0) * kappa**2 * lam
    if spec.n == 3:
        return -(27.0 * sqrt(6.0) * lam * kappa**2 + 2.25 * sqrt(6.0) * lam**3)
    if spec.n == 4:
        return -(128.0 / 9.0) * sqrt(6.0) * lam**2 * kappa
    if spec.n == 5:
        return -(125.0 / 9.0) * sqrt(30.0) * kappa**2 * lam
    return -27.0 * sqrt(5.0) * kappa**3    # n == 6


def stark_shift(state: BareLabel, params: ModelParams, rwa: bool = False) -> float:
    """Second-order level shift sum_b |<b|V|state>|^2 / (E_state - E_b).

    Exact finite sum over the (at most four, two under the RWA) states V
    connects to; no truncation is involved.
    """
    e0 = bare_energy(state.atom, state.photons, params.omega_c)
    shift = 0.0
    for (atom_b, m_b), amp in coupling_elements(
        state.atom, state.photons, params.lam, params.kappa, rwa
    ):
        den = e0 - bare_energy(atom_b, m_b, params.omega_c)
        if abs(den) < EPS_DEGENERATE:
            raise DegenerateDenominatorError(
                f"|{state.atom},{state.photons}> is degenerate with "
                f"|{atom_b},{m_b}> at omega_c={params.omega_c} "
                f"(|denominator| = {abs(den):.2e})"
            )
        shift += amp * amp / den
    return shift


def path_sum_coupling(
    spec: ResonanceSpec, params: ModelParams, rwa: bool | None = None
) -> float:
    """Third-order coupling between |g, n0+n> and |e, n0> by explicit path
    enumeration:

        Omega_eff = sum_{a,b not in {i,f}} <f|V|b><b|V|a><a|V|i>
                    / [(E_i - E_a)(E_i - E_b)]

    evaluated at params.omega_c (the closed forms correspond to
    omega_c = omega_a/n). This is the oracle for the closed-form couplings;
    it enumerates paths from the structure of V rather than from any
    per-resonance scheme, works for any n0, and returns exactly 0.0 when no
    third-order path exists (e.g. n in {4,5,6} under the RWA).

    ``rwa`` defaults to spec.rwa; pass it explicitly to probe RWA path
    structure for resonances the RWA does not support.
    """
    if rwa is None:
        rwa = spec.rwa
    lam, kappa, omega_c = params.lam, params.kappa, params.omega_c
    i_state = (spec.initial.atom, spec.initial.photons)
    f_state = (spec.final.atom, spec.final.photons)
    e_i = bare_energy(*i_state, omega_c)

    def energy_denominator(state: tuple[str, int]) -> float:
        den = e_i - bare_energy(*state, omega_c)
        if abs(den) < EPS_DEGENERATE:
            raise DegenerateDenominatorError(
                f"intermediate |{state[0]},{state[1]}> is degenerate with the "
                f"initial state at omega_c={omega_c} (|denominator| = {abs(den):.2e})"
            )
        return den

    total = 0.0
    for a_state, amp_ai in coupling_elements(*i_state, lam, kappa, rwa):
        if a_state in (i_state, f_state):
            continue
        den_a = energy_denominator(a_state)
        for b_state, amp_ba in coupling_elements(*a_state, lam, kappa, rwa):
            if b_state in (i_state, f_state):
                continue
            amp_fb = dict(coupling_elements(*b_state, lam, kappa, rwa)).get(
                f_state
            )
            if amp_fb is None:
                continue
            den_b = energy_denominator(b_state)
            total += amp_fb * amp_ba * amp_ai / (den_a * den_b)
    return total


def resonant_frequency_from_stark(
    spec: ResonanceSpec, lam: float, kappa: float
) -> float:
    """Resonance frequency obtained by equating the Stark-shifted pair
    energies (shifts evaluated at omega_c = omega_a/n):

        omega_c' = 1/n - [Delta E_i(1/n) - Delta E_f(1/n)] / n

    Independent route to resonant_frequency; the two agree to rounding.
    """
    omega0 = 1.0 / spec.n
    params = ModelParams(omega_c=omega0, lam=lam, kappa=kappa)
    d_i = stark_shift(spec.initial, params, spec.rwa)
    d_f = stark_shift(spec.final, params, spec.rwa)
    return omega0 - (d_i - d_f) / spec.n


def effective_two_level(spec: ResonanceSpec, params: ModelParams) -> np.ndarray:
    """Effective 2x2 Hamiltonian on span{|g, n0+n>, |e, n0>} at params.omega_c:
    Stark-shifted bare energies on the diagonal, the third-order coupling off
    the diagonal. Real symmetric; its gap at the resonance is 2|Omega_eff|."""
    e_i = bare_energy(spec.initial.atom, spec.initial.photons, params.omega_c)
    e_f = bare_energy(spec.final.atom, spec.final.photons, params.omega_c)
    d_i = stark_shift(spec.initial, params, spec.rwa)
    d_f = stark_shift(spec.final, params, spec.rwa)
    omega = path_sum_coupling(spec, params)
    return np.array([[e_i + d_i, omega], [omega, e_f + d_f]])


def perturbative_resonance(
    spec: ResonanceSpec, lam: float, kappa: float
) -> ResonanceResult:
    """Bundle the closed forms (n0 = 0) or the path-sum evaluation (n0 > 0)
    into a ResonanceResult."""
    omega_res = resonant_frequency(spec, lam, kappa)
    if spec.n0 == 0:
        omega_eff = effective_coupling(spec, lam, kappa)
        method = "closed_form"
    else:
        params = ModelParams(omega_c=1.0 / spec.n, lam=lam, kappa=kappa)
        omega_eff = path_sum_coupling(spec, params)
        method = "path_sum"
    return ResonanceResult(
        omega_c_res=omega_res,
        omega_eff=omega_eff,
        delta=2 * abs(omega_eff),
        method=method,
    )
