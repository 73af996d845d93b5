#!/usr/bin/env python3
"""Solve the default achromatic quarter-wave stack thicknesses.

The shipped two-layer MgF2/quartz stack (crossed axes) is calibration data:
its thicknesses are chosen so the single-pass retardation matches two
measured values of the physical retarder,

    0.93 * pi/2  at 850 nm   (quarter-wave band)
    2 * pi / 7   at 405.4 nm (pump wavelength)

This script solves the 2x2 linear system for those two constraints with the
same Dodge (MgF2) and Ghosh (crystal quartz) Sellmeier data the library
ships, and reports the residual at 785 nm, where the two-layer model cannot
be pinned independently. Run it after touching the birefringence data and
copy the thicknesses into WaveplateStack::default_acqwp().
"""

import math


def n_mgf2(axis, lam):
    """Dodge, Appl. Opt. 23, 1980 (1984); lam in um."""
    l2 = lam * lam
    if axis == "o":
        n2 = 1 + (0.48755108 * l2 / (l2 - 0.04338408 ** 2)
                  + 0.39875031 * l2 / (l2 - 0.09461442 ** 2)
                  + 2.3120353 * l2 / (l2 - 23.793604 ** 2))
    else:
        n2 = 1 + (0.41344023 * l2 / (l2 - 0.03684262 ** 2)
                  + 0.50497499 * l2 / (l2 - 0.09076162 ** 2)
                  + 2.4904862 * l2 / (l2 - 23.771995 ** 2))
    return math.sqrt(n2)


def n_quartz(axis, lam):
    """Ghosh, Opt. Commun. 163, 95 (1999); lam in um."""
    l2 = lam * lam
    if axis == "o":
        n2 = (1.28604141 + 1.07044083 * l2 / (l2 - 1.00585997e-2)
              + 1.10202242 * l2 / (l2 - 100))
    else:
        n2 = (1.28851804 + 1.09509924 * l2 / (l2 - 1.02101864e-2)
              + 1.15662475 * l2 / (l2 - 100))
    return math.sqrt(n2)


def retardation(d_mgf2_um, d_qtz_um, lam_um):
    dn_m = n_mgf2("e", lam_um) - n_mgf2("o", lam_um)
    dn_q = n_quartz("e", lam_um) - n_quartz("o", lam_um)
    return 2 * math.pi * (dn_m * d_mgf2_um - dn_q * d_qtz_um) / lam_um


def solve():
    targets = [(0.850, 0.93 * math.pi / 2), (0.4054, 2 * math.pi / 7)]
    rows, rhs = [], []
    for lam, gamma in targets:
        dn_m = n_mgf2("e", lam) - n_mgf2("o", lam)
        dn_q = n_quartz("e", lam) - n_quartz("o", lam)
        rows.append((dn_m, -dn_q))
        rhs.append(gamma * lam / (2 * math.pi))
    det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    d_m = (rhs[0] * rows[1][1] - rows[0][1] * rhs[1]) / det
    d_q = (rows[0][0] * rhs[1] - rhs[0] * rows[1][0]) / det
    return d_m, d_q


def main():
    d_m, d_q = solve()
    print(f"MgF2 layer:   {d_m:12.6f} um  (orientation +1)")
    print(f"quartz layer: {d_q:12.6f} um  (orientation -1)")
    for lam, label in ((0.4054, "pump"), (0.785, "unconstrained"),
                       (0.850, "quarter-wave")):
        g = retardation(round(d_m, 6), round(d_q, 6), lam)
        print(f"  {lam * 1e3:6.1f} nm ({label:13s}): {g:.9f} rad"
              f" = {g / (2 * math.pi):+.4f} waves")


if __name__ == "__main__":
    main()
