#pragma once

#include <string>

#include "spdckit/counting.hpp"
#include "spdckit/phasecomp.hpp"
#include "spdckit/phasematch.hpp"
#include "spdckit/polstate.hpp"

namespace spdckit {

/// Full description of one source setup, loaded from a single JSON document.
/// The idler wavelength is derived from energy conservation at load time.
struct SourceConfig {
  double pump_nm = 0.0;
  double signal_nm = 0.0;
  double idler_nm = 0.0;
  CrystalSpec crystal;
  WaveplateStack waveplate;
  CompensatorSpec compensator;  // temperature_c mirrors temperatures.yvo_c
  SpectralFilter filter;
  DetectionConfig detection;
  SourceBrightness brightness;
  double ktp_temperature_c = 25.0;
  double balance = 0.5;
};

/// Parse and validate; errors carry the offending field name.
SourceConfig load_source_config(const std::string& path);
SourceConfig source_config_from_json_string(const std::string& text);

/// Standalone waveplate-stack document, same schema as the config's
/// "waveplate" section: {"tilt_deg": ..., "layers": [{"material",
/// "thickness_um", "orientation"}, ...]}.
WaveplateStack waveplate_stack_from_json_string(const std::string& text);
WaveplateStack load_waveplate_stack(const std::string& path);

/// FNV-1a 64-bit hash of the raw config bytes, as "fnv1a64:<hex>".
std::string config_hash(const std::string& file_bytes);

/// Contents of the given config file (used for hashing alongside parsing).
std::string read_file(const std::string& path);

/// Elementwise uncompensated + compensation phase for the configured setup,
/// over the energy-conserving diagonal.
PhaseMap total_phase_map(const MaterialLibrary& lib, const SourceConfig& cfg,
                         const std::vector<double>& signal_grid_nm,
                         bool compensated, bool subtract_offset);

/// Phase map that feeds the state construction: the window-center phase with
/// the compensator at its model reference temperature is subtracted, so the
/// zero of the entangled-state phase is the calibrated setpoint and a
/// compensator temperature offset rotates the state exactly like the
/// experimental knob.
PhaseMap state_phase_map(const MaterialLibrary& lib, const SourceConfig& cfg,
                         const std::vector<double>& signal_grid_nm);

/// Evenly spaced grid of n points over center +/- half_width.
std::vector<double> linspace_window(double center, double half_width, int n);

}  // namespace spdckit
