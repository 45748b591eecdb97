#!/usr/bin/env python3
"""Iterated index tables for ellipsoid plane circles, three ways.

For each plane circle y_j the script prints, per iterate m:
  * the crossing-count index/nullity of the monodromy path,
  * the Galerkin Morse index/nullity of the dual action form at s = m A_j,
  * the closed-form lattice count,
all of which must agree (after the fixed convention shifts i_path = i + n
and nu_galerkin = nu + 1).  A disagreement would mean an engine bug, so
this doubles as a quick health check.

    python3 scripts/index_table_demo.py --radii 1.0,1.1,1.25 --m-max 4
"""

import argparse
import math
import sys

import numpy as np

from symstab import (
    SurfaceSpec,
    diamond_all,
    find_orbits,
    iterate_indices,
    mean_index,
    monodromy_path,
    stabilized_index,
)


def lattice_index(radii, j, m):
    # 2 * #{(l, k) : k >= 1, k/r_l^2 < m/r_j^2, l != j} + 2(m - 1)
    rr = [r * r for r in radii]
    tot = m - 1
    for l, q in enumerate(rr):
        if l != j:
            tot += math.ceil(m * rr[j] / q) - 1
    return 2 * tot


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radii", default="1.0,1.1")
    ap.add_argument("--alpha", type=float, default=1.5)
    ap.add_argument("--m-max", type=int, default=5)
    ap.add_argument("--mean-K", type=int, default=256)
    args = ap.parse_args(argv)

    radii = tuple(float(r) for r in args.radii.split(","))
    spec = SurfaceSpec(radii)
    n = spec.n
    G = diamond_all([np.eye(2) * (r * r / 2.0) for r in radii])

    mismatches = 0
    for orb in find_orbits(spec, args.alpha):
        path = monodromy_path(spec, args.alpha, orb)
        est, bound = mean_index(path, K=args.mean_K)
        exact = 2.0 * sum(radii[orb.plane] ** 2 / r ** 2 for r in radii)
        print(f"plane {orb.plane}: action {orb.action:.6f}  "
              f"mean index {est:.4f} +- {bound:.4f} (closed form {exact:.4f})")
        print(f"  {'m':>3} {'i_path':>6} {'nu':>3} {'galerkin':>9} "
              f"{'lattice':>8}")
        for m, res in enumerate(iterate_indices(path, args.m_max), start=1):
            i_m, nu_m = res.as_tuple()
            gi, gn, K = stabilized_index(G, m * orb.action, n)
            lat = lattice_index(radii, orb.plane, m)
            ok = (gi, gn) == (i_m - n, nu_m + 1) and lat == i_m - n
            mismatches += not ok
            print(f"  {m:>3} {i_m:>6} {nu_m:>3} {f'({gi},{gn})@{K}':>9} "
                  f"{lat:>8}  {'' if ok else '<- MISMATCH'}")
        print()
    print("all routes agree" if not mismatches
          else f"{mismatches} mismatching rows")
    return 0 if not mismatches else 1


if __name__ == "__main__":
    sys.exit(main())
