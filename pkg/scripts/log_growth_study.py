"""Tabulate F, A and B near lambda = 0 and test B against ln(1/lambda).

Prints quadrature and closed-form values of F side by side, the B samples,
and the log-regression on the requested grid.  B levels off at a constant,
which is what the closed form predicts.
"""

from __future__ import annotations

import argparse

from sp4endo.oracles import closed_form_elliptic
from sp4endo.orbital import TestFunction, default_lambda_grid, fit_log, singular_expansion


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--profile", default="5,4", help="R,m of the bump")
    ap.add_argument("--points", type=int, default=13)
    ap.add_argument("--lo", type=float, default=1e-4)
    ap.add_argument("--hi", type=float, default=1e-1)
    args = ap.parse_args()

    f = TestFunction.parse(args.profile)
    se = singular_expansion(f, default_lambda_grid(args.points, args.lo, args.hi))
    print(f"U = {se.U:.15g}   A0 = -2 f(I) = {se.A0:.15g}")
    print(f"{'lambda':>12} {'F quad':>22} {'F closed':>22} {'B':>18}")
    for lam, F, B in zip(se.lams, se.F, se.B):
        print(f"{lam:12.4e} {F:22.15g} {closed_form_elliptic(lam, f):22.15g} {B:18.12f}")
    fit = se.log_fit
    print(f"log fit: slope {fit.slope:.6g}, intercept {fit.intercept:.6g}, r^2 {fit.r2:.6f}")
    # the same fit on the tail alone shows the slope dying out
    tail = fit_log(se.lams[len(se.lams) // 2:], se.B[len(se.B) // 2:])
    print(f"tail fit: slope {tail.slope:.3g}, r^2 {tail.r2:.4f}")


if __name__ == "__main__":
    main()
