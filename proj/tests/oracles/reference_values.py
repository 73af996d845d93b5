#!/usr/bin/env python3
"""Independent reference evaluations for the constants pinned in the C++ tests.

Every Sellmeier/thermo-optic formula here is typed in directly from the cited
publication and evaluated with plain Python floats, separately from the C++
library. Run this script to regenerate the numbers quoted in tests/ and in
configs/paper.json; nothing in this file calls the library under test.
"""

import math

# ---------------------------------------------------------------------------
# Dispersion data (lambda in micrometers throughout)
# ---------------------------------------------------------------------------

def n_ktp_z(lam):
    """Fradkin et al., Appl. Phys. Lett. 74, 914 (1999), flux-grown KTP n_z."""
    l2 = lam * lam
    n2 = (2.12725
          + 1.18431 * l2 / (l2 - 5.14852e-2)
          + 0.6603 * l2 / (l2 - 100.00507)
          - 9.68956e-3 * l2)
    return math.sqrt(n2)


def n_ktp_y(lam):
    """Kato & Takaoka, Appl. Opt. 41, 5040 (2002), KTP n_y."""
    l2 = lam * lam
    n2 = 3.45018 + 0.04341 / (l2 - 0.04597) + 16.98825 / (l2 - 39.43799)
    return math.sqrt(n2)


def _inv_lambda_poly(coeffs, lam):
    return sum(c / lam ** m for m, c in enumerate(coeffs))


# Emanueli & Arie, Appl. Opt. 42, 6661 (2003): dn = n1(lam)*dT + n2(lam)*dT^2,
# dT = T - 25 C, coefficients are inverse-lambda cubics.
KTP_Z_N1 = [9.9587e-6, 9.9228e-6, -8.9603e-6, 4.1010e-6]
KTP_Z_N2 = [-1.1882e-8, 10.459e-8, -9.8136e-8, 3.1481e-8]
KTP_Y_N1 = [6.2897e-6, 6.3061e-6, -6.0629e-6, 2.6486e-6]
KTP_Y_N2 = [-0.14445e-8, 2.2244e-8, -3.5770e-8, 2.3060e-8]


def n_ktp(axis, lam, t_c):
    if axis == "z":
        n = n_ktp_z(lam)
        n1, n2 = KTP_Z_N1, KTP_Z_N2
    else:
        n = n_ktp_y(lam)
        n1, n2 = KTP_Y_N1, KTP_Y_N2
    dt = t_c - 25.0
    return n + _inv_lambda_poly(n1, lam) * dt + _inv_lambda_poly(n2, lam) * dt * dt


# YVO4 room-temperature Sellmeier: standard fit as tabulated by the crystal
# vendors (CASTECH/Foctek datasheets; reproduced on refractiveindex.info).
# Thermo-optic constants: effective dn/dT near 25 C in the 0.78-0.85 um band,
# representative of the temperature-dependent Sellmeier measurements of
# rare-earth vanadates (Zelmon et al., Appl. Opt. 49, 644 (2010)).
YVO4_DNO_DT = 8.5e-6
YVO4_DNE_DT = 3.9e-6


def n_yvo4(axis, lam, t_c=25.0):
    l2 = lam * lam
    if axis == "o":
        n2 = 3.77834 + 0.069736 / (l2 - 0.04724) - 0.0108133 * l2
        dndt = YVO4_DNO_DT
    else:
        n2 = 4.59905 + 0.110534 / (l2 - 0.04813) - 0.0122676 * l2
        dndt = YVO4_DNE_DT
    return math.sqrt(n2) + dndt * (t_c - 25.0)


def n_mgf2(axis, lam):
    """Dodge, Appl. Opt. 23, 1980 (1984)."""
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
    """Ghosh, Opt. Commun. 163, 95 (1999), crystalline quartz."""
    l2 = lam * lam
    if axis == "o":
        n2 = (1.28604141 + 1.07044083 * l2 / (l2 - 1.00585997e-2)
              + 1.10202242 * l2 / (l2 - 100))
    else:
        n2 = (1.28851804 + 1.09509924 * l2 / (l2 - 1.02101864e-2)
              + 1.15662475 * l2 / (l2 - 100))
    return math.sqrt(n2)


def n_air(lam):
    """Peck & Reeder, J. Opt. Soc. Am. 62, 958 (1972); dry air, 15 C, 101.325 kPa."""
    s2 = 1.0 / (lam * lam)
    return 1.0 + 1e-8 * (5791817.0 / (238.0185 - s2) + 167909.0 / (57.362 - s2))


# ---------------------------------------------------------------------------
# Derived quantities
# ---------------------------------------------------------------------------

PUMP_NM = 405.4
SIGNAL_NM = 784.0
KTP_LEN_MM = 11.48
POLING_UM = 3.425
YVO_LEN_MM = 18.5


def idler_nm(pump_nm, signal_nm):
    return 1.0 / (1.0 / pump_nm - 1.0 / signal_nm)


def qpm_mismatch_per_m(pump_nm, signal_nm, t_c, poling_um):
    lam_i = idler_nm(pump_nm, signal_nm)
    npump = n_ktp("z", pump_nm * 1e-3, t_c)
    nsig = n_ktp("z", signal_nm * 1e-3, t_c)
    nidl = n_ktp("z", lam_i * 1e-3, t_c)
    return 2 * math.pi * (npump / (pump_nm * 1e-9)
                          - nsig / (signal_nm * 1e-9)
                          - nidl / (lam_i * 1e-9)
                          - 1.0 / (poling_um * 1e-6))


def phasematch_temperature():
    lo, hi = 0.0, 150.0
    flo = qpm_mismatch_per_m(PUMP_NM, SIGNAL_NM, lo, POLING_UM)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = qpm_mismatch_per_m(PUMP_NM, SIGNAL_NM, mid, POLING_UM)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# Waveplate stack: MgF2 layer (+1) and crystal-quartz layer (-1), crossed axes.
# Thicknesses solved below so the single-pass retardation is 0.93*pi/2 at
# 850 nm and 2*pi/7 at 405.4 nm (the two calibration wavelengths).

def stack_retardation(d_mgf2_um, d_qtz_um, lam_um):
    dn_m = n_mgf2("e", lam_um) - n_mgf2("o", lam_um)
    dn_q = n_quartz("e", lam_um) - n_quartz("o", lam_um)
    return 2 * math.pi * (dn_m * d_mgf2_um - dn_q * d_qtz_um) / lam_um


def solve_stack():
    targets = [(0.850, 0.93 * math.pi / 2), (0.4054, 2 * math.pi / 7)]
    # 2x2 linear solve: 2*pi*(dn_m*dM - dn_q*dQ)/lam = target
    rows = []
    rhs = []
    for lam, gamma in targets:
        dn_m = n_mgf2("e", lam) - n_mgf2("o", lam)
        dn_q = n_quartz("e", lam) - n_quartz("o", lam)
        rows.append((dn_m, -dn_q))
        rhs.append(gamma * lam / (2 * math.pi))
    det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    d_m = (rhs[0] * rows[1][1] - rows[0][1] * rhs[1]) / det
    d_q = (rows[0][0] * rhs[1] - rhs[0] * rows[1][0]) / det
    return d_m, d_q


def uncompensated_phase(signal_nm, idler, d_m, d_q, t_ktp_c):
    ls, li = signal_nm * 1e-3, idler * 1e-3
    crystal = 2 * math.pi * KTP_LEN_MM * 1e3 * (
        n_ktp("y", li, t_ktp_c) / li + n_ktp("y", ls, t_ktp_c) / ls)
    qwp = 2 * (stack_retardation(d_m, d_q, ls) + stack_retardation(d_m, d_q, li))
    return crystal + qwp


def compensation_phase(signal_nm, idler, l_yvo_mm, t_c=25.0):
    ls, li = signal_nm * 1e-3, idler * 1e-3
    br_s = n_yvo4("o", ls, t_c) - n_yvo4("e", ls, t_c)
    br_i = n_yvo4("o", li, t_c) - n_yvo4("e", li, t_c)
    return 2 * math.pi * l_yvo_mm * 1e3 * (br_s / ls + br_i / li)


def total_phase(signal_nm, l_yvo_mm, d_m, d_q, t_ktp_c, t_yvo_c=25.0):
    lam_i = idler_nm(PUMP_NM, signal_nm)
    return (uncompensated_phase(signal_nm, lam_i, d_m, d_q, t_ktp_c)
            + compensation_phase(signal_nm, lam_i, l_yvo_mm, t_yvo_c))


def peak_to_peak(values):
    return max(values) - min(values)


def optimize_length(d_m, d_q, t_ktp_c, half_window_nm=1.75, n=41):
    grid = [SIGNAL_NM - half_window_nm + 2 * half_window_nm * k / (n - 1)
            for k in range(n)]

    def flatness(l_mm):
        return peak_to_peak([total_phase(s, l_mm, d_m, d_q, t_ktp_c) for s in grid])

    gr = (math.sqrt(5.0) - 1) / 2
    a, b = 0.0, 50.0
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = flatness(c), flatness(d)
    while b - a > 1e-4:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = flatness(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = flatness(d)
    return 0.5 * (a + b), flatness(0.5 * (a + b))


def report():
    print("== dispersion ==")
    print(f"n_ktp_y(784 nm, 25 C)        = {n_ktp_y(0.784):.12f}")
    print(f"n_ktp_z(784 nm, 25 C)        = {n_ktp_z(0.784):.12f}")
    print(f"n_ktp_z(405.4 nm, 25 C)      = {n_ktp_z(0.4054):.12f}")
    print(f"n_air(800 nm) - 1            = {n_air(0.800) - 1:.6e}")
    print(f"n_yvo4_o(800 nm)             = {n_yvo4('o', 0.800):.12f}")
    print(f"n_yvo4_e(800 nm)             = {n_yvo4('e', 0.800):.12f}")
    print(f"yvo4 o-e (800 nm)            = {n_yvo4('o', 0.800) - n_yvo4('e', 0.800):.9f}")
    print(f"n_mgf2_o(850 nm)             = {n_mgf2('o', 0.850):.12f}")
    print(f"n_quartz_o(850 nm)           = {n_quartz('o', 0.850):.12f}")

    lam_i = idler_nm(PUMP_NM, SIGNAL_NM)
    print("\n== phase matching ==")
    print(f"idler(405.4, 784)            = {lam_i:.6f} nm")
    tstar = phasematch_temperature()
    print(f"phasematch temperature       = {tstar:.4f} C")
    resid = qpm_mismatch_per_m(PUMP_NM, SIGNAL_NM, tstar, POLING_UM) * KTP_LEN_MM * 1e-3 / 2
    print(f"|dk*L/2| residual            = {abs(resid):.3e} rad")

    # unfiltered joint spectrum FWHM: fine scan of sinc^2(dk L/2)
    def intensity(s_nm):
        dk = qpm_mismatch_per_m(PUMP_NM, s_nm, tstar, POLING_UM)
        x = dk * KTP_LEN_MM * 1e-3 / 2
        return 1.0 if x == 0 else (math.sin(x) / x) ** 2

    step = 0.001
    lo = SIGNAL_NM
    while intensity(lo) > 0.5:
        lo -= step
    hi = SIGNAL_NM
    while intensity(hi) > 0.5:
        hi += step
    print(f"unfiltered fwhm (sinc scan)  = {hi - lo:.4f} nm")

    print("\n== waveplate stack ==")
    d_m, d_q = solve_stack()
    print(f"solved d_mgf2 = {d_m:.6f} um, d_quartz = {d_q:.6f} um")
    # shipped stack data keeps 6 decimals; evaluate everything with those
    d_m, d_q = round(d_m, 6), round(d_q, 6)
    for lam in (0.4054, 0.785, 0.850):
        g = stack_retardation(d_m, d_q, lam)
        print(f"  retardation @{lam*1e3:7.1f} nm = {g:.9f} rad"
              f"  ({g / (2 * math.pi):+.4f} waves)")
    print(f"  target 0.93*pi/2 = {0.93 * math.pi / 2:.9f}, 2*pi/7 = {2 * math.pi / 7:.9f}")

    print("\n== relative phase ==")
    phi_u = uncompensated_phase(SIGNAL_NM, lam_i, d_m, d_q, tstar)
    phi_c = compensation_phase(SIGNAL_NM, lam_i, YVO_LEN_MM)
    print(f"uncompensated(784, idler)    = {phi_u:.6f} rad")
    print(f"compensation(784, idler, 18.5) = {phi_c:.6f} rad")

    # pinned at the fixed evaluation point used by the C++ tests
    idler_pin = 839.497095
    phi_u25 = uncompensated_phase(SIGNAL_NM, idler_pin, d_m, d_q, 25.0)
    print(f"uncompensated @25 C          = {phi_u25:.10f} rad")
    phi_c_pin = compensation_phase(SIGNAL_NM, idler_pin, YVO_LEN_MM)
    print(f"compensation pin (18.5 mm)   = {phi_c_pin:.10f} rad")
    g784 = stack_retardation(d_m, d_q, 0.784)
    g839 = stack_retardation(d_m, d_q, idler_pin * 1e-3)
    print(f"stack retardation @784 nm    = {g784:.12f} rad")
    print(f"stack retardation @idler pin = {g839:.12f} rad")

    lstar, flat = optimize_length(d_m, d_q, tstar)
    print(f"L* (p2p over +/-1.75 nm)     = {lstar:.4f} mm  flatness {flat:.6f} rad")
    lstar25, _ = optimize_length(d_m, d_q, 25.0)
    print(f"L* with KTP at 25 C          = {lstar25:.4f} mm")

    grid15 = [SIGNAL_NM - 15 + 30 * k / 120 for k in range(121)]
    p2p_u15 = peak_to_peak([total_phase(s, 0.0, d_m, d_q, tstar) for s in grid15])
    p2p_c15 = peak_to_peak([total_phase(s, lstar, d_m, d_q, tstar) for s in grid15])
    grid_f = [SIGNAL_NM - 1.75 + 3.5 * k / 80 for k in range(81)]
    p2p_u = peak_to_peak([total_phase(s, 0.0, d_m, d_q, tstar) for s in grid_f])
    p2p_c = peak_to_peak([total_phase(s, lstar, d_m, d_q, tstar) for s in grid_f])
    print(f"p2p uncompensated +/-15 nm   = {p2p_u15:.4f} rad")
    print(f"p2p compensated +/-15 nm     = {p2p_c15:.4f} rad")
    print(f"p2p uncompensated window     = {p2p_u:.4f} rad")
    print(f"p2p compensated window       = {p2p_c:.6f} rad  ratio {p2p_u / p2p_c:.1f}")

    print("\n== temperature ==")
    dphi = compensation_phase(SIGNAL_NM, lam_i, YVO_LEN_MM, 26.0) - phi_c
    print(f"yvo dphi/dT (18.5 mm)        = {dphi:.6f} rad/K")
    print(f"yvo dT(pi)                   = {math.pi / abs(dphi):.4f} K")
    phimax = 2 * math.acos(math.sqrt(0.995))
    print(f"phi_max(F=0.995)             = {phimax:.6f} rad")
    print(f"yvo dT_max(F=0.995)          = {phimax / abs(dphi):.4f} K")

    def ktp_doublepass_phase(t_c):
        ls, li = SIGNAL_NM * 1e-3, lam_i * 1e-3
        br_s = n_ktp("z", ls, t_c) - n_ktp("y", ls, t_c)
        br_i = n_ktp("z", li, t_c) - n_ktp("y", li, t_c)
        return 2 * math.pi * 2 * KTP_LEN_MM * 1e3 * (br_s / ls + br_i / li)

    dphi_k = ktp_doublepass_phase(tstar + 0.5) - ktp_doublepass_phase(tstar - 0.5)
    print(f"ktp double-pass dphi/dT      = {dphi_k:.6f} rad/K (at T*)")
    print(f"ktp dT(pi)                   = {math.pi / abs(dphi_k):.4f} K")
    print(f"ktp dT_max(F=0.995)          = {phimax / abs(dphi_k):.4f} K")

    print("\n== mirror displacement ==")
    d_um = 100.0
    lp, ls, li = PUMP_NM * 1e-3, SIGNAL_NM * 1e-3, lam_i * 1e-3
    dphi_air = 2 * math.pi * 2 * d_um * ((n_air(lp) - 1) / lp
                                         - (n_air(ls) - 1) / ls
                                         - (n_air(li) - 1) / li)
    print(f"displacement phase @100 um   = {dphi_air:.6f} rad")

    print("\n== counting calibration ==")
    s_s, s_i, twofold = 61000.0, 88000.0, 11800.0
    power_mw, trans, tau_cc, tau_dead, dark = 0.0104, 0.9, 3.2e-9, 50e-9, 300.0
    arr_s = s_s / (1 - s_s * tau_dead)
    arr_i = s_i / (1 - s_i * tau_dead)
    live = (s_s / arr_s) * (s_i / arr_i)
    acc = s_s * s_i * tau_cc
    true_det = twofold - acc
    rg_etaeta_t2 = true_det / live
    rg = (arr_s - dark) * (arr_i - dark) / rg_etaeta_t2
    eta_s = (arr_s - dark) / (rg * trans)
    eta_i = (arr_i - dark) / (rg * trans)
    print(f"accidentals @61k/88k/3.2ns   = {acc:.4f} cps")
    print(f"generated pairs @10.4 uW     = {rg:.4f} /s")
    print(f"pairs_per_mw                 = {rg / power_mw:.10e}")
    print(f"eta_s = {eta_s:.12f}, eta_i = {eta_i:.12f}")

    # joint spectrum of a doubled crystal for the sinc width scaling check
    def fwhm_for_length(l_mm, tstar):
        def inten(s_nm):
            dk = qpm_mismatch_per_m(PUMP_NM, s_nm, tstar, POLING_UM)
            x = dk * l_mm * 1e-3 / 2
            return 1.0 if x == 0 else (math.sin(x) / x) ** 2
        step = 0.001
        lo = SIGNAL_NM
        while inten(lo) > 0.5:
            lo -= step
        hi = SIGNAL_NM
        while inten(hi) > 0.5:
            hi += step
        return hi - lo

    tstar = phasematch_temperature()
    print(f"fwhm L=11.48 mm              = {fwhm_for_length(11.48, tstar):.4f} nm")
    print(f"fwhm L=22.96 mm              = {fwhm_for_length(22.96, tstar):.4f} nm")

    # fidelity at the power where the pre-saturation true pair rate is 1.1 Mcps
    brightness = rg / power_mw
    p_full = 1.1e6 / (brightness * eta_s * eta_i * trans ** 2)
    print(f"power for 1.1 Mcps true rate = {p_full:.6f} mW")
    for tau in (0.5e-9, 3.2e-9):
        r = brightness * p_full
        a_s = r * eta_s * trans + dark
        a_i = r * eta_i * trans + dark
        sat_s = a_s / (1 + a_s * tau_dead)
        sat_i = a_i / (1 + a_i * tau_dead)
        tdet = r * eta_s * eta_i * trans ** 2 * (sat_s / a_s) * (sat_i / a_i)
        acc_r = sat_s * sat_i * tau
        f_state = (1 + 0.9999) / 2
        fid = (f_state * tdet + 0.25 * acc_r) / (tdet + acc_r)
        print(f"tau={tau*1e9:4.1f} ns: raw_fidelity={fid:.4f} (true detected {tdet:.0f})")


if __name__ == "__main__":
    report()
