"""Closed-form ground states of radial power fields, checked against the radial oracle.

Run: python3 demos/ground_states.py
"""
from groundfield.errors import NoConvergence
from groundfield.fields import RadialPowerField, schrodinger_potential
from groundfield.harmonics import coulomb_spectrum, oscillator_spectrum
from groundfield.oracle import default_tolerance, radial_ground_energy
from groundfield.states import jx_energy, solve_ground_state


def main():
    n = 3
    print("field x/|x|^p with alpha = 1 in three dimensions")
    for p in (0.0, 0.5, 1.0, 1.5, 2.0):
        X = RadialPowerField(1.0, p, n)
        phi = solve_ground_state(X)
        if not phi.admissible:
            print(f"  p = {p}: not normalizable ({phi.reason})")
            continue
        J = jx_energy(phi, X).value
        # the ground state has J_X = 0, so E0 of |X|^2 - div X is zero
        V = schrodinger_potential(X)
        profile = V.radial_profile()
        try:
            E = f"{radial_ground_energy(profile, n, default_tolerance(profile), phi).E:+.2e}"
        except NoConvergence as err:
            # V ~ -r^(-p) near the origin; past p = 1 the finite-volume oracle converges too slowly
            E = f"no convergence ({err})"
        print(f"  p = {p}: J_X(phi) = {J:.2e}, oracle E0 of |X|^2 - div X = {E}")

    print("\noscillator ladder, alpha = 1")
    for e in oscillator_spectrum(n, 1.0, 3):
        print(f"  k = {e.k}: E = {e.E:g} (degeneracy {e.degeneracy})")
    print("one-electron atom ladder, -Delta - 2/|x|")
    for e in coulomb_spectrum(n, 1.0, 3):
        print(f"  k = {e.k}: E = {e.E:.6f} (degeneracy {e.degeneracy})")


if __name__ == "__main__":
    main()
