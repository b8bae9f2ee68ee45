"""Lower bounds from a candidate field and the Hardy constant approached by a regularized family.

Run: python3 demos/bounds_and_hardy.py
"""
import numpy as np

from groundfield.fields import RadialPowerField, power_potential, zero_field
from groundfield.verify import hardy_constant, hardy_sweep, hersch_bound


def main():
    rng = np.random.default_rng(0)
    V = power_potential(1.0, 2.0, 3)   # |x|^2, E0 = 3
    for name, X in (("own field x", RadialPowerField(1.0, 0.0, 3)),
                    ("half field x/2", RadialPowerField(0.5, 0.0, 3)),
                    ("zero field", zero_field(3))):
        rep = hersch_bound(V, X, rng=rng)
        print(f"V = |x|^2, X = {name}: inf(V - |X|^2 + div X) = {rep.rhs:.6f} <= E0 = {rep.lhs:.6f}")

    for n in (3, 4):
        print(f"\nHardy ratio over (n-2)^2/4 = {hardy_constant(n)} in n = {n}")
        for row in hardy_sweep(n, (1e-1, 1e-2, 1e-3)):
            print(f"  eps = {row['eps']:g}: {row['ratioOverConstant']:.5f}")


if __name__ == "__main__":
    main()
