"""Normalised transfer f^H = Delta * O along a1 -> 1 with a2 fixed.

Prints the raw orbital integral, the transfer factor, f^H and the adjacent
jumps of f^H on a refining sequence.
"""

from __future__ import annotations

import argparse

from sp4endo.orbital import TestFunction, smooth_transfer_hyperbolic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--profile", default="5,4")
    ap.add_argument("--a2", type=float, default=3.0)
    ap.add_argument("--line", default="1.5,1.25,1.1,1.05,1.01,1.005")
    args = ap.parse_args()

    f = TestFunction.parse(args.profile)
    line = [float(x) for x in args.line.split(",")]
    rows, diag = smooth_transfer_hyperbolic(f, [(a1, args.a2) for a1 in line])
    print(f"{'a1':>8} {'O_gamma':>20} {'Delta':>12} {'f^H':>20}")
    for r in rows:
        print(f"{r.a1:8.4f} {r.orbital:20.12g} {r.delta:12.6g} {r.value:20.12g}")
    print("jumps:", " ".join(f"{j:.4g}" for j in diag.jumps), "| decreasing:", diag.decreasing)


if __name__ == "__main__":
    main()
