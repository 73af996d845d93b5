#pragma once

#include <vector>

#include "spdckit/dispersion.hpp"

namespace spdckit {

struct CrystalSpec {
  Material material = Material::Ktp;
  double length_mm = 0.0;
  double poling_period_um = 0.0;
};

/// Energy conservation 1/li = 1/lp - 1/ls. Requires ls > lp.
double idler_wavelength(double pump_nm, double signal_nm);

/// Collinear type-0 process: pump, signal and idler all polarized along the
/// crystal z-axis. Construction derives the idler and enforces the
/// signal <= idler convention.
struct SpdcProcess {
  double pump_nm = 0.0;
  double signal_nm = 0.0;
  double idler_nm = 0.0;
  CrystalSpec crystal;
  double temperature_c = 25.0;

  static SpdcProcess collinear(double pump_nm, double signal_nm,
                               const CrystalSpec& crystal,
                               double temperature_c);
};

/// First-order quasi-phase-matching mismatch, rad/m:
/// dk = 2 pi [ n_z(lp)/lp - n_z(ls)/ls - n_z(li)/li - 1/Lambda ].
double qpm_mismatch(const MaterialLibrary& lib, const SpdcProcess& process);

/// Deterministic bisection on [0, 150] C for the temperature where
/// qpm_mismatch vanishes; iterates until |dk L/2| < 1e-6 rad. Throws
/// std::domain_error (carrying the endpoint residuals) when the interval
/// brackets no root.
double phasematch_temperature(const MaterialLibrary& lib, double pump_nm,
                              double signal_nm, const CrystalSpec& crystal);

struct JointSpectrum {
  std::vector<double> signal_nm;
  std::vector<double> intensity;  // sinc^2(dk L/2), peak normalized to 1
  double fwhm_nm = 0.0;           // linear interpolation between grid points
};

/// Spectral intensity over a strictly increasing signal grid. For FWHM
/// reporting at paper-scale crystal lengths the grid spacing should be
/// 0.01 nm or finer.
JointSpectrum joint_spectrum(const MaterialLibrary& lib, double pump_nm,
                             double temperature_c, const CrystalSpec& crystal,
                             const std::vector<double>& signal_grid_nm);

}  // namespace spdckit
