#include "spdckit/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace spdckit {

namespace {

using nlohmann::json;

double require_positive(const json& j, const char* field) {
  if (!j.contains(field))
    throw std::invalid_argument(std::string("config: missing field '") +
                                field + "'");
  const double v = j.at(field).get<double>();
  if (!(v > 0.0))
    throw std::invalid_argument(std::string("config: field '") + field +
                                "' must be > 0");
  return v;
}

double require_fraction(const json& j, const char* field) {
  if (!j.contains(field))
    throw std::invalid_argument(std::string("config: missing field '") +
                                field + "'");
  const double v = j.at(field).get<double>();
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string("config: field '") + field +
                                "' must lie in [0, 1]");
  return v;
}

double require_nonnegative(const json& j, const char* field) {
  if (!j.contains(field))
    throw std::invalid_argument(std::string("config: missing field '") +
                                field + "'");
  const double v = j.at(field).get<double>();
  if (v < 0.0)
    throw std::invalid_argument(std::string("config: field '") + field +
                                "' must be >= 0");
  return v;
}

WaveplateStack waveplate_stack_from_json(const json& wp) {
  WaveplateStack stack;
  stack.tilt_deg = wp.value("tilt_deg", 0.0);
  if (!wp.contains("layers") || !wp.at("layers").is_array() ||
      wp.at("layers").empty())
    throw std::invalid_argument(
        "config: waveplate.layers must be a nonempty array");
  for (const auto& layer : wp.at("layers")) {
    WaveplateLayer l;
    l.material = material_from_string(layer.at("material").get<std::string>());
    l.thickness_um = require_positive(layer, "thickness_um");
    l.orientation = layer.at("orientation").get<int>();
    if (l.orientation != 1 && l.orientation != -1)
      throw std::invalid_argument(
          "config: waveplate layer orientation must be +1 or -1");
    stack.layers.push_back(l);
  }
  return stack;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::invalid_argument("config: cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string config_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << h;
  return out.str();
}

SourceConfig source_config_from_json_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") +
                                e.what());
  }

  SourceConfig cfg;
  cfg.pump_nm = require_positive(doc, "pump_nm");
  cfg.signal_nm = require_positive(doc, "signal_nm");
  cfg.idler_nm = idler_wavelength(cfg.pump_nm, cfg.signal_nm);

  const json& cry = doc.at("crystal");
  cfg.crystal.material = Material::Ktp;
  cfg.crystal.length_mm = require_positive(cry, "length_mm");
  cfg.crystal.poling_period_um = require_positive(cry, "poling_period_um");

  cfg.waveplate = waveplate_stack_from_json(doc.at("waveplate"));

  const json& comp = doc.at("compensator");
  cfg.compensator.length_mm = require_nonnegative(comp, "length_mm");

  const json& temps = doc.at("temperatures");
  if (!temps.contains("ktp_c") || !temps.contains("yvo_c"))
    throw std::invalid_argument("config: temperatures needs ktp_c and yvo_c");
  cfg.ktp_temperature_c = temps.at("ktp_c").get<double>();
  cfg.compensator.temperature_c = temps.at("yvo_c").get<double>();

  const json& fil = doc.at("filter");
  cfg.filter.center_nm = require_positive(fil, "center_nm");
  cfg.filter.fwhm_nm = require_positive(fil, "fwhm_nm");
  cfg.filter.peak_transmission = require_fraction(fil, "peak_transmission");
  const std::string shape = fil.value("shape", "tophat");
  if (shape == "tophat")
    cfg.filter.shape = SpectralFilter::Shape::Tophat;
  else if (shape == "gaussian")
    cfg.filter.shape = SpectralFilter::Shape::Gaussian;
  else
    throw std::invalid_argument("config: filter.shape must be tophat or gaussian");

  const json& det = doc.at("detection");
  cfg.detection.eta_s = require_fraction(det, "eta_s");
  cfg.detection.eta_i = require_fraction(det, "eta_i");
  cfg.detection.dark_s_cps = require_nonnegative(det, "dark_s_cps");
  cfg.detection.dark_i_cps = require_nonnegative(det, "dark_i_cps");
  cfg.detection.coincidence_window_s =
      require_nonnegative(det, "coincidence_window_ns") * 1e-9;
  cfg.detection.dead_time_s = require_nonnegative(det, "dead_time_ns") * 1e-9;
  cfg.detection.analyzer_transmission =
      require_fraction(det, "analyzer_transmission");

  const json& bri = doc.at("brightness");
  cfg.brightness.pairs_per_mw = require_positive(bri, "pairs_per_mw");
  cfg.brightness.spectral_fwhm_nm = require_positive(bri, "spectral_fwhm_nm");

  cfg.balance = doc.value("balance", 0.5);
  if (!(cfg.balance >= 0.0 && cfg.balance <= 1.0))
    throw std::invalid_argument("config: balance must lie in [0, 1]");

  return cfg;
}

SourceConfig load_source_config(const std::string& path) {
  return source_config_from_json_string(read_file(path));
}

WaveplateStack waveplate_stack_from_json_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("waveplate: invalid JSON: ") +
                                e.what());
  }
  return waveplate_stack_from_json(doc);
}

WaveplateStack load_waveplate_stack(const std::string& path) {
  return waveplate_stack_from_json_string(read_file(path));
}

PhaseMap total_phase_map(const MaterialLibrary& lib, const SourceConfig& cfg,
                         const std::vector<double>& signal_grid_nm,
                         bool compensated, bool subtract_offset) {
  CompensatorSpec comp = cfg.compensator;
  if (!compensated) comp.length_mm = 0.0;
  return diagonal_phase_map(lib, cfg.pump_nm, signal_grid_nm, cfg.crystal,
                            cfg.waveplate, comp, cfg.ktp_temperature_c,
                            subtract_offset);
}

PhaseMap state_phase_map(const MaterialLibrary& lib, const SourceConfig& cfg,
                         const std::vector<double>& signal_grid_nm) {
  PhaseMap map = diagonal_phase_map(lib, cfg.pump_nm, signal_grid_nm,
                                    cfg.crystal, cfg.waveplate,
                                    cfg.compensator, cfg.ktp_temperature_c,
                                    false);
  CompensatorSpec setpoint = cfg.compensator;
  setpoint.temperature_c =
      lib.get(Material::Yvo4, Axis::Ordinary).reference_temperature_c;
  const double s0 =
      0.5 * (signal_grid_nm.front() + signal_grid_nm.back());
  const double i0 = idler_wavelength(cfg.pump_nm, s0);
  const double reference =
      uncompensated_phase(lib, s0, i0, cfg.crystal, cfg.waveplate,
                          cfg.ktp_temperature_c) +
      compensation_phase(lib, s0, i0, setpoint);
  for (double& p : map.phase_rad) p -= reference;
  map.offset_subtracted = true;
  return map;
}

std::vector<double> linspace_window(double center, double half_width, int n) {
  if (n < 1) throw std::invalid_argument("linspace_window: need n >= 1");
  std::vector<double> grid;
  grid.reserve(n);
  if (n == 1) {
    grid.push_back(center);
    return grid;
  }
  for (int k = 0; k < n; ++k)
    grid.push_back(center - half_width +
                   2.0 * half_width * static_cast<double>(k) / (n - 1));
  return grid;
}

}  // namespace spdckit
