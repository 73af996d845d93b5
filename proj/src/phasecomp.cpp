#include "spdckit/phasecomp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spdckit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

WaveplateStack WaveplateStack::default_acqwp() {
  // Thicknesses from tools/fit_acqwp_stack.py: single-pass retardation
  // 0.93*pi/2 at 850 nm and 2*pi/7 at 405.4 nm, normal incidence.
  WaveplateStack s;
  s.layers = {{Material::MgF2, 313.118327, +1},
              {Material::SiO2, 389.926334, -1}};
  s.tilt_deg = 0.0;
  return s;
}

double waveplate_retardation(const MaterialLibrary& lib,
                             const WaveplateStack& stack,
                             double wavelength_nm) {
  if (stack.layers.empty())
    throw std::invalid_argument("waveplate stack has no layers");

  double gamma = 0.0;
  for (const auto& layer : stack.layers) {
    double dn = 0.0;
    switch (layer.material) {
      case Material::Vacuum:
      case Material::Air:
        dn = 0.0;
        break;
      case Material::Ktp:
        dn = lib.index(Material::Ktp, Axis::Z, wavelength_nm, 25.0) -
             lib.index(Material::Ktp, Axis::Y, wavelength_nm, 25.0);
        break;
      default:
        dn = lib.index(layer.material, Axis::Extraordinary, wavelength_nm,
                       25.0) -
             lib.index(layer.material, Axis::Ordinary, wavelength_nm, 25.0);
        break;
    }
    double t_eff_um = layer.thickness_um;
    if (stack.tilt_deg != 0.0 && dn != 0.0) {
      // path-length trim: internal refraction angle from the mean index
      const double n_avg =
          0.5 * (lib.index(layer.material, Axis::Extraordinary, wavelength_nm,
                           25.0) +
                 lib.index(layer.material, Axis::Ordinary, wavelength_nm,
                           25.0));
      const double sin_int = std::sin(deg_to_rad(stack.tilt_deg)) / n_avg;
      t_eff_um /= std::sqrt(1.0 - sin_int * sin_int);
    }
    gamma += layer.orientation * kTwoPi * dn * (t_eff_um * 1e3) / wavelength_nm;
  }
  return gamma;
}

double uncompensated_phase(const MaterialLibrary& lib, double signal_nm,
                           double idler_nm, const CrystalSpec& crystal,
                           const WaveplateStack& stack,
                           double ktp_temperature_c) {
  const double length_nm = crystal.length_mm * 1e6;
  const double ny_s =
      lib.index(crystal.material, Axis::Y, signal_nm, ktp_temperature_c);
  const double ny_i =
      lib.index(crystal.material, Axis::Y, idler_nm, ktp_temperature_c);
  const double crystal_phase =
      kTwoPi * length_nm * (ny_i / idler_nm + ny_s / signal_nm);
  const double qwp_phase = 2.0 * (waveplate_retardation(lib, stack, signal_nm) +
                                  waveplate_retardation(lib, stack, idler_nm));
  return crystal_phase + qwp_phase;
}

double compensation_phase(const MaterialLibrary& lib, double signal_nm,
                          double idler_nm, const CompensatorSpec& comp) {
  if (comp.length_mm == 0.0) return 0.0;
  const double length_nm = comp.length_mm * 1e6;
  const double t = comp.temperature_c;
  // n_o - n_e at both wavelengths, exactly the bracketed combination
  const double br_s = lib.birefringence(Material::Yvo4, signal_nm, t);
  const double br_i = lib.birefringence(Material::Yvo4, idler_nm, t);
  return kTwoPi * length_nm * (br_s / signal_nm + br_i / idler_nm);
}

double PhaseMap::at(std::size_t signal_index, std::size_t idler_index) const {
  if (diagonal) {
    if (signal_index != idler_index)
      throw std::invalid_argument("diagonal map has no off-diagonal entries");
    return phase_rad.at(signal_index);
  }
  return phase_rad.at(signal_index * idler_nm.size() + idler_index);
}

PhaseMap diagonal_phase_map(const MaterialLibrary& lib, double pump_nm,
                            const std::vector<double>& signal_grid_nm,
                            const CrystalSpec& crystal,
                            const WaveplateStack& stack,
                            const CompensatorSpec& comp,
                            double ktp_temperature_c, bool subtract_offset) {
  if (signal_grid_nm.empty())
    throw std::invalid_argument("phase map: empty signal grid");

  PhaseMap map;
  map.diagonal = true;
  map.signal_nm = signal_grid_nm;
  map.idler_nm.reserve(signal_grid_nm.size());
  map.phase_rad.reserve(signal_grid_nm.size());
  for (double s : signal_grid_nm) {
    const double i = idler_wavelength(pump_nm, s);
    map.idler_nm.push_back(i);
    map.phase_rad.push_back(
        uncompensated_phase(lib, s, i, crystal, stack, ktp_temperature_c) +
        compensation_phase(lib, s, i, comp));
  }

  if (subtract_offset) {
    const double s0 =
        0.5 * (signal_grid_nm.front() + signal_grid_nm.back());
    const double i0 = idler_wavelength(pump_nm, s0);
    const double center =
        uncompensated_phase(lib, s0, i0, crystal, stack, ktp_temperature_c) +
        compensation_phase(lib, s0, i0, comp);
    for (double& p : map.phase_rad) p -= center;
    map.offset_subtracted = true;
  }
  return map;
}

PhaseMap grid_phase_map(const MaterialLibrary& lib,
                        const std::vector<double>& signal_grid_nm,
                        const std::vector<double>& idler_grid_nm,
                        const CrystalSpec& crystal, const WaveplateStack& stack,
                        const CompensatorSpec& comp, double ktp_temperature_c,
                        bool subtract_offset) {
  if (signal_grid_nm.empty() || idler_grid_nm.empty())
    throw std::invalid_argument("phase map: empty grid");

  PhaseMap map;
  map.diagonal = false;
  map.signal_nm = signal_grid_nm;
  map.idler_nm = idler_grid_nm;
  map.phase_rad.reserve(signal_grid_nm.size() * idler_grid_nm.size());
  for (double s : signal_grid_nm)
    for (double i : idler_grid_nm)
      map.phase_rad.push_back(
          uncompensated_phase(lib, s, i, crystal, stack, ktp_temperature_c) +
          compensation_phase(lib, s, i, comp));

  if (subtract_offset) {
    const double s0 = 0.5 * (signal_grid_nm.front() + signal_grid_nm.back());
    const double i0 = 0.5 * (idler_grid_nm.front() + idler_grid_nm.back());
    const double center =
        uncompensated_phase(lib, s0, i0, crystal, stack, ktp_temperature_c) +
        compensation_phase(lib, s0, i0, comp);
    for (double& p : map.phase_rad) p -= center;
    map.offset_subtracted = true;
  }
  return map;
}

FlatnessReport flatness(const PhaseMap& map, Weighting weighting,
                        const std::vector<double>* weights) {
  if (map.phase_rad.empty())
    throw std::invalid_argument("flatness: empty phase map");
  if (weighting == Weighting::Spectrum) {
    if (weights == nullptr || weights->size() != map.phase_rad.size())
      throw std::invalid_argument(
          "flatness: spectrum weighting needs one weight per phase sample");
  }

  FlatnessReport rep;
  rep.weighting = weighting;
  const auto [mn, mx] =
      std::minmax_element(map.phase_rad.begin(), map.phase_rad.end());
  rep.peak_to_peak_rad = *mx - *mn;

  double wsum = 0.0, mean = 0.0;
  for (std::size_t k = 0; k < map.phase_rad.size(); ++k) {
    const double w =
        (weighting == Weighting::Spectrum) ? (*weights)[k] : 1.0;
    wsum += w;
    mean += w * map.phase_rad[k];
  }
  if (wsum <= 0.0) throw std::invalid_argument("flatness: zero total weight");
  mean /= wsum;
  double var = 0.0;
  for (std::size_t k = 0; k < map.phase_rad.size(); ++k) {
    const double w =
        (weighting == Weighting::Spectrum) ? (*weights)[k] : 1.0;
    const double d = map.phase_rad[k] - mean;
    var += w * d * d;
  }
  rep.rms_rad = std::sqrt(var / wsum);

  const auto [smin, smax] =
      std::minmax_element(map.signal_nm.begin(), map.signal_nm.end());
  const auto [imin, imax] =
      std::minmax_element(map.idler_nm.begin(), map.idler_nm.end());
  rep.signal_window_nm = {*smin, *smax};
  rep.idler_window_nm = {*imin, *imax};
  return rep;
}

CompensatorDesign optimize_compensator_length(
    const MaterialLibrary& lib, double pump_nm,
    const std::vector<double>& signal_window_nm, const CrystalSpec& crystal,
    const WaveplateStack& stack, double ktp_temperature_c,
    double compensator_temperature_c, Weighting weighting,
    const std::vector<double>* weights) {
  if (signal_window_nm.empty())
    throw std::invalid_argument("optimize_compensator_length: empty window");

  auto objective = [&](double length_mm) -> double {
    CompensatorSpec comp{length_mm, compensator_temperature_c};
    if (signal_window_nm.size() == 1) {
      // single point: zero the phase slope along the energy-conserving line
      const double h = 0.01;  // nm
      const double s = signal_window_nm.front();
      auto phase = [&](double sn) {
        const double in = idler_wavelength(pump_nm, sn);
        return uncompensated_phase(lib, sn, in, crystal, stack,
                                   ktp_temperature_c) +
               compensation_phase(lib, sn, in, comp);
      };
      const double slope = (phase(s + h) - phase(s - h)) / (2.0 * h);
      return slope * slope;
    }
    const PhaseMap map =
        diagonal_phase_map(lib, pump_nm, signal_window_nm, crystal, stack,
                           comp, ktp_temperature_c, false);
    const FlatnessReport rep = flatness(map, weighting, weights);
    return weighting == Weighting::Spectrum ? rep.rms_rad
                                            : rep.peak_to_peak_rad;
  };

  // golden-section; the objective is convex in the length
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 50.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > 1e-3) {  // mm
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = objective(d);
    }
  }

  CompensatorDesign design;
  design.length_mm = 0.5 * (a + b);
  // keep the exact zero endpoint when nothing needs compensating
  if (objective(0.0) <= objective(design.length_mm)) design.length_mm = 0.0;

  CompensatorSpec best{design.length_mm, compensator_temperature_c};
  if (signal_window_nm.size() == 1) {
    design.report.peak_to_peak_rad = 0.0;
    design.report.rms_rad = 0.0;
    design.report.signal_window_nm = {signal_window_nm.front(),
                                      signal_window_nm.front()};
    const double i0 = idler_wavelength(pump_nm, signal_window_nm.front());
    design.report.idler_window_nm = {i0, i0};
    design.report.weighting = weighting;
  } else {
    const PhaseMap map =
        diagonal_phase_map(lib, pump_nm, signal_window_nm, crystal, stack,
                           best, ktp_temperature_c, false);
    design.report = flatness(map, weighting, weights);
  }
  return design;
}

double temperature_phase_shift(const MaterialLibrary& lib,
                               const CompensatorSpec& comp, double delta_t_k,
                               double signal_nm, double idler_nm) {
  CompensatorSpec shifted = comp;
  shifted.temperature_c += delta_t_k;
  return compensation_phase(lib, signal_nm, idler_nm, shifted) -
         compensation_phase(lib, signal_nm, idler_nm, comp);
}

double bell_fidelity_phase(double phase_rad) {
  return 0.5 * (1.0 + std::cos(phase_rad));
}

namespace {

double tolerance_from_slope(double fidelity_target, double dphi_dt) {
  if (!(fidelity_target > 0.5 && fidelity_target < 1.0))
    throw std::domain_error(
        "temperature_tolerance: fidelity target must lie in (0.5, 1)");
  const double phi_max = 2.0 * std::acos(std::sqrt(fidelity_target));
  if (dphi_dt == 0.0)
    throw std::domain_error(
        "temperature_tolerance: element phase does not depend on temperature");
  return phi_max / std::abs(dphi_dt);
}

}  // namespace

double temperature_tolerance(const MaterialLibrary& lib,
                             const CompensatorSpec& comp,
                             double fidelity_target, double signal_nm,
                             double idler_nm) {
  const double h = 0.05;  // K
  const double dphi_dt =
      (temperature_phase_shift(lib, comp, +h, signal_nm, idler_nm) -
       temperature_phase_shift(lib, comp, -h, signal_nm, idler_nm)) /
      (2.0 * h);
  return tolerance_from_slope(fidelity_target, dphi_dt);
}

double temperature_tolerance(const MaterialLibrary& lib,
                             const CrystalSpec& crystal,
                             double ktp_temperature_c, double fidelity_target,
                             double signal_nm, double idler_nm) {
  auto doublepass_phase = [&](double t_c) {
    const double br_s = lib.birefringence(crystal.material, signal_nm, t_c);
    const double br_i = lib.birefringence(crystal.material, idler_nm, t_c);
    return kTwoPi * (2.0 * crystal.length_mm * 1e6) *
           (br_s / signal_nm + br_i / idler_nm);
  };
  const double h = 0.05;  // K
  const double dphi_dt = (doublepass_phase(ktp_temperature_c + h) -
                          doublepass_phase(ktp_temperature_c - h)) /
                         (2.0 * h);
  return tolerance_from_slope(fidelity_target, dphi_dt);
}

double mirror_displacement_phase(const DispersionModel& air_model,
                                 double displacement_um, double pump_nm,
                                 double signal_nm, double idler_nm) {
  if (displacement_um < 0.0)
    throw std::domain_error("mirror displacement must be nonnegative");
  // refractivities only: the 1/lp - 1/ls - 1/li part vanishes by energy
  // conservation and would otherwise swamp the signal with rounding error
  const double rp = air_model.index(pump_nm, 15.0) - 1.0;
  const double rs = air_model.index(signal_nm, 15.0) - 1.0;
  const double ri = air_model.index(idler_nm, 15.0) - 1.0;
  const double d_nm = displacement_um * 1e3;
  return kTwoPi * 2.0 * d_nm *
         (rp / pump_nm - rs / signal_nm - ri / idler_nm);
}

}  // namespace spdckit
