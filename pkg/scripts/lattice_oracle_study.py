"""Convergence of the lattice oracle towards the hyperbolic quadrature value."""

from __future__ import annotations

import argparse

from sp4endo.oracles import lattice_orbital_hyperbolic
from sp4endo.orbital import TestFunction, orbital_hyperbolic


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a1", type=float, default=2.0)
    ap.add_argument("--a2", type=float, default=3.0)
    ap.add_argument("--profile", default="5,4")
    ap.add_argument("--sizes", default="16,24,32,48")
    args = ap.parse_args()

    f = TestFunction.parse(args.profile)
    q = orbital_hyperbolic(args.a1, args.a2, f)
    print(f"quadrature: {q.value:.15g} (error estimate {q.error:.2g})")
    for n in (int(s) for s in args.sizes.split(",")):
        v = lattice_orbital_hyperbolic(args.a1, args.a2, f, n=n)
        print(f"lattice n={n:3d}: {v:.12g}   rel diff {abs(v - q.value) / abs(q.value):.2e}")


if __name__ == "__main__":
    main()
