"""
01_multiphoton_resonance.py

A single qubit-resonator cell with both a one-photon coupling
lam (a + a+) sigma_x and a two-photon coupling kap (a^2 + a+^2) sigma_x
hides a ladder of multiphoton resonances: near omega_c = omega_a / n the
bare pair |g, n> and |e, 0> is almost degenerate, and third-order
processes built from the two couplings connect the pair even though no
single term does. The degeneracy is lifted into an avoided crossing of
gap Delta = 2 |Omega_eff|, displaced from omega_a/n by the differential
Stark shift of the pair.

This script walks one resonance (default n = 4) through the whole story:

  1. the bare picture and which third-order routes exist,
  2. the closed-form prediction omega_c' = 1/n + c_lam lam^2 + c_kap kap^2
     (exact rational coefficients) and Omega_eff,
  3. the numerical scan: track the pair through the spectrum of the full
     Hamiltonian, minimize the gap, compare against the prediction,
  4. what happens when one coupling is switched off: the n = 4 route needs
     both couplings (it is a lam.lam.kap process), and at kap = 0 a parity
     operator commuting with H forbids the transition outright, so the scan
     reports a symmetry-protected true crossing instead of an avoided one,
  5. a short sweep of lam showing the prediction degrade gracefully as the
     couplings stop being small.

Total runtime is a few seconds. All frequencies are in units of the atom
splitting omega_a.

Run:
    python3 demos/01_multiphoton_resonance.py
    python3 demos/01_multiphoton_resonance.py --n 3 --lam 0.04 --kappa 0.02
"""

from __future__ import annotations

import argparse

import numpy as np

from grmsim import (
    BasisSpec,
    ModelParams,
    ResonanceSpec,
    build_grm,
    coupling_elements,
    effective_coupling,
    find_avoided_crossing,
    frequency_coefficients,
    parity_operator,
    resonant_frequency,
)
from grmsim.spectrum import default_cutoff, default_scan_window


def bar(title: str) -> None:
    print()
    print("-" * 72)
    print(title)
    print("-" * 72)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument("--n", type=int, default=4, help="photon number of the resonance")
    ap.add_argument("--lam", type=float, default=0.05, help="one-photon coupling")
    ap.add_argument("--kappa", type=float, default=0.01, help="two-photon coupling")
    ap.add_argument("--cutoff", type=int, default=None, help="Fock cutoff (default n+12)")
    args = ap.parse_args()

    spec = ResonanceSpec(n=args.n)
    lam, kap = args.lam, args.kappa
    cutoff = args.cutoff if args.cutoff is not None else default_cutoff(spec)
    basis = BasisSpec(1, cutoff)

    # ------------------------------------------------------------------
    # 1. The bare picture
    # ------------------------------------------------------------------
    bar(f"1. Bare picture at the {spec.n}-photon resonance")
    print(f"states        |g, {spec.n}>  and  |e, 0>")
    print(f"degenerate at omega_c = 1/{spec.n} = {1 / spec.n:.6f}")
    print("direct matrix element <e,0|V|g,%d>:" % spec.n)
    elems = coupling_elements("g", spec.n, lam, kap)
    direct = dict(elems).get(("e", 0), 0.0)
    print(f"   {direct!r}  (single application of V cannot bridge {spec.n} photons)")
    print("so the transition is third order: V G0 V G0 V summed over virtual")
    print("intermediate states, each route weighted by two energy denominators.")

    # ------------------------------------------------------------------
    # 2. Closed-form prediction
    # ------------------------------------------------------------------
    bar("2. Closed-form prediction")
    c_lam, c_kap = frequency_coefficients(spec)
    omega_pert = resonant_frequency(spec, lam, kap)
    omega_eff = effective_coupling(spec, lam, kap)
    print(f"omega_c' = 1/{spec.n} + ({c_lam}) lam^2 + ({c_kap}) kap^2")
    print(f"         = {omega_pert:.10f}   at lam={lam}, kap={kap}")
    print(f"Omega_eff = {omega_eff:.6e}  ->  predicted gap Delta = {2 * abs(omega_eff):.6e}")

    # ------------------------------------------------------------------
    # 3. Numerical scan of the full Hamiltonian
    # ------------------------------------------------------------------
    bar(f"3. Numerical scan (cutoff {cutoff}, window around 1/{spec.n})")
    res = find_avoided_crossing(spec, lam, kap, basis=basis)
    err_omega = abs(omega_pert - res.omega_c_res) / res.omega_c_res * 100
    err_delta = abs(2 * abs(omega_eff) - res.delta) / res.delta * 100
    print(f"scan window       {default_scan_window(spec)}")
    print(f"omega_c* (scan)   {res.omega_c_res:.10f}   pert. error {err_omega:.2f}%")
    print(f"Delta    (scan)   {res.delta:.6e}   pert. error {err_delta:.2f}%")
    lo_i, lo_f = res.overlaps["window_min"]
    hi_i, hi_f = res.overlaps["window_max"]
    print("bare character at the window edges (should be near 1, i.e. the")
    print("tracked eigenlevels really are |g,%d> and |e,0> away from the" % spec.n)
    print(f"crossing):  lo ({lo_i:.3f}, {lo_f:.3f})   hi ({hi_i:.3f}, {hi_f:.3f})")

    # ------------------------------------------------------------------
    # 4. Switch one coupling off: selection rules and parity
    # ------------------------------------------------------------------
    bar("4. Selection rules: the same scan at kap = 0")
    omega_only_lam = effective_coupling(spec, lam, 0.0)
    print(f"closed-form Omega_eff(lam, kap=0) = {omega_only_lam!r}")
    res0 = find_avoided_crossing(spec, lam, 0.0, basis=basis)
    print(f"scan: is_crossing = {res0.is_crossing}, Delta = {res0.delta!r}")
    if spec.n % 2 == 0:
        h0 = build_grm(ModelParams(omega_c=res0.omega_c_res, lam=lam, kappa=0.0), basis)
        p1 = parity_operator("Z2", basis)
        comm = np.linalg.norm(h0.matrix @ p1.matrix - p1.matrix @ h0.matrix)
        print(f"parity check: ||[H, Pi_1]|| = {comm:.3e} at kap = 0, and the pair")
        print(f"|g,{spec.n}>, |e,0> carries opposite Pi_1 eigenvalues "
              f"({(-1) ** spec.n:+d} vs -1),")
        print("so the crossing is symmetry-protected, not merely small.")

    # ------------------------------------------------------------------
    # 5. How far does third order carry?
    # ------------------------------------------------------------------
    bar("5. Prediction vs scan as lam grows (kap = %.3g)" % kap)
    print(f"{'lam':>6}  {'omega_pert':>12}  {'omega_scan':>12}  {'err%':>6}"
          f"  {'Delta_pert':>11}  {'Delta_scan':>11}  {'err%':>6}")
    for lam_i in (0.02, 0.035, 0.05, 0.065, 0.08):
        r = find_avoided_crossing(spec, lam_i, kap, basis=basis)
        w_p = resonant_frequency(spec, lam_i, kap)
        d_p = 2 * abs(effective_coupling(spec, lam_i, kap))
        e_w = abs(w_p - r.omega_c_res) / r.omega_c_res * 100
        e_d = abs(d_p - r.delta) / r.delta * 100 if r.delta else float("nan")
        print(f"{lam_i:6.3f}  {w_p:12.8f}  {r.omega_c_res:12.8f}  {e_w:6.2f}"
              f"  {d_p:11.4e}  {r.delta:11.4e}  {e_d:6.2f}")
    print()
    print("The frequency stays accurate well past the gap, which picks up")
    print("higher-order corrections first: the gap is itself a third-order")
    print("quantity, so its leading error is relative, not absolute.")


if __name__ == "__main__":
    main()
