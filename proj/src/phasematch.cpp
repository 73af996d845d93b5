#include "spdckit/phasematch.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spdckit {

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(x) / x;
}

// no signal <= idler convention here: scans may view the pair from either
// channel, and the mismatch is symmetric under the exchange
SpdcProcess process_unchecked(double pump_nm, double signal_nm,
                              const CrystalSpec& crystal,
                              double temperature_c) {
  SpdcProcess p;
  p.pump_nm = pump_nm;
  p.signal_nm = signal_nm;
  p.idler_nm = idler_wavelength(pump_nm, signal_nm);
  p.crystal = crystal;
  p.temperature_c = temperature_c;
  return p;
}

}  // namespace

double idler_wavelength(double pump_nm, double signal_nm) {
  if (!(pump_nm > 0.0) || !(signal_nm > 0.0))
    throw std::domain_error("wavelengths must be positive");
  if (!(signal_nm > pump_nm)) {
    std::ostringstream msg;
    msg << "signal wavelength (" << signal_nm
        << " nm) must exceed the pump wavelength (" << pump_nm << " nm)";
    throw std::domain_error(msg.str());
  }
  return 1.0 / (1.0 / pump_nm - 1.0 / signal_nm);
}

SpdcProcess SpdcProcess::collinear(double pump_nm, double signal_nm,
                                   const CrystalSpec& crystal,
                                   double temperature_c) {
  SpdcProcess p;
  p.pump_nm = pump_nm;
  p.signal_nm = signal_nm;
  p.idler_nm = idler_wavelength(pump_nm, signal_nm);
  if (p.signal_nm > p.idler_nm + 1e-9)
    throw std::domain_error(
        "signal must be the shorter wavelength (signal <= idler)");
  p.crystal = crystal;
  p.temperature_c = temperature_c;
  return p;
}

double qpm_mismatch(const MaterialLibrary& lib, const SpdcProcess& process) {
  const double t = process.temperature_c;
  const double np = lib.index(process.crystal.material, Axis::Z,
                              process.pump_nm, t);
  const double ns = lib.index(process.crystal.material, Axis::Z,
                              process.signal_nm, t);
  const double ni = lib.index(process.crystal.material, Axis::Z,
                              process.idler_nm, t);
  const double two_pi = 2.0 * std::numbers::pi;
  return two_pi * (np / (process.pump_nm * 1e-9) -
                   ns / (process.signal_nm * 1e-9) -
                   ni / (process.idler_nm * 1e-9) -
                   1.0 / (process.crystal.poling_period_um * 1e-6));
}

double phasematch_temperature(const MaterialLibrary& lib, double pump_nm,
                              double signal_nm, const CrystalSpec& crystal) {
  auto mismatch = [&](double t_c) {
    return qpm_mismatch(lib,
                        process_unchecked(pump_nm, signal_nm, crystal, t_c));
  };

  double lo = 0.0, hi = 150.0;
  double f_lo = mismatch(lo);
  double f_hi = mismatch(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    std::ostringstream msg;
    msg << "no phase-matching root in [0, 150] C: dk(0 C) = " << f_lo
        << " rad/m, dk(150 C) = " << f_hi << " rad/m";
    throw std::domain_error(msg.str());
  }

  const double half_length_m = crystal.length_mm * 1e-3 / 2.0;
  double mid = lo;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double f_mid = mismatch(mid);
    if (std::abs(f_mid * half_length_m) < 1e-6 || hi - lo < 1e-12) break;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

JointSpectrum joint_spectrum(const MaterialLibrary& lib, double pump_nm,
                             double temperature_c, const CrystalSpec& crystal,
                             const std::vector<double>& signal_grid_nm) {
  if (signal_grid_nm.empty())
    throw std::invalid_argument("joint_spectrum: empty signal grid");
  for (std::size_t k = 1; k < signal_grid_nm.size(); ++k)
    if (!(signal_grid_nm[k] > signal_grid_nm[k - 1]))
      throw std::invalid_argument(
          "joint_spectrum: signal grid must be strictly increasing");

  JointSpectrum js;
  js.signal_nm = signal_grid_nm;
  js.intensity.reserve(signal_grid_nm.size());

  const double half_length_m = crystal.length_mm * 1e-3 / 2.0;
  double peak = 0.0;
  for (double s : signal_grid_nm) {
    const double dk =
        qpm_mismatch(lib, process_unchecked(pump_nm, s, crystal,
                                            temperature_c));
    const double amp = sinc(dk * half_length_m);
    const double inten = amp * amp;
    js.intensity.push_back(inten);
    peak = std::max(peak, inten);
  }
  if (peak > 0.0)
    for (double& v : js.intensity) v /= peak;

  // FWHM around the global maximum, linear interpolation at half height.
  std::size_t imax = 0;
  for (std::size_t k = 1; k < js.intensity.size(); ++k)
    if (js.intensity[k] > js.intensity[imax]) imax = k;

  auto cross = [&](std::size_t a, std::size_t b) {
    const double ya = js.intensity[a], yb = js.intensity[b];
    return js.signal_nm[a] +
           (0.5 - ya) / (yb - ya) * (js.signal_nm[b] - js.signal_nm[a]);
  };

  double left = js.signal_nm.front();
  for (std::size_t k = imax; k-- > 0;) {
    if (js.intensity[k] < 0.5) {
      left = cross(k, k + 1);
      break;
    }
  }
  double right = js.signal_nm.back();
  for (std::size_t k = imax + 1; k < js.intensity.size(); ++k) {
    if (js.intensity[k] < 0.5) {
      right = cross(k - 1, k);
      break;
    }
  }
  js.fwhm_nm = right - left;
  return js;
}

}  // namespace spdckit
