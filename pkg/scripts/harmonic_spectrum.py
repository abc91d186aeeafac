"""Harmonic levels: half-offset WKB versus the Numerov oracle.

For the harmonic well the half-offset rule is exact, E_n = (n + 1/2)
alpha hbar omega, so the oracle column is really a check of the solver
stack; the last column shows how far the independent eigenvalues drift.

    python scripts/harmonic_spectrum.py --alpha 0.5 --n-max 8
"""

import argparse

from alphawkb import HarmonicPotential, ScreeningParams, eigenvalue_solve, quantize


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=0.5, help="screening parameter")
    ap.add_argument("--omega", type=float, default=1.0)
    ap.add_argument("--n-max", type=int, default=8)
    args = ap.parse_args()

    pot = HarmonicPotential(omega=args.omega)
    params = ScreeningParams(alpha=args.alpha)

    print(f"# harmonic omega={args.omega} alpha={args.alpha}")
    print(f"{'n':>3} {'E_wkb':>16} {'E_exact':>16} {'E_oracle':>16} {'oracle rel':>11}")
    for n in range(args.n_max + 1):
        e_wkb = quantize(pot, n, params)
        e_exact = (n + 0.5) * args.alpha * params.hbar * args.omega
        e_orc = eigenvalue_solve(pot, n, params).energy
        rel = abs(e_orc - e_exact) / e_exact
        print(f"{n:>3} {e_wkb:>16.10f} {e_exact:>16.10f} {e_orc:>16.10f} {rel:>11.2e}")


if __name__ == "__main__":
    main()
