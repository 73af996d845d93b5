#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace spdckit {

struct DetectionConfig {
  double eta_s = 1.0;  // detection-path efficiencies
  double eta_i = 1.0;
  double dark_s_cps = 0.0;
  double dark_i_cps = 0.0;
  double coincidence_window_s = 0.0;
  double dead_time_s = 0.0;  // non-paralyzable, per channel
  double analyzer_transmission = 1.0;
};

struct SourceBrightness {
  double pairs_per_mw = 0.0;  // generated pairs/s per mW at the crystal
  double spectral_fwhm_nm = 0.0;
};

struct RateReport {
  double power_mw = 0.0;
  double singles_s_cps = 0.0;
  double singles_i_cps = 0.0;
  double true_coincidences_cps = 0.0;  // before detector saturation
  double accidentals_cps = 0.0;
  double detected_twofold_cps = 0.0;
  double raw_fidelity = 0.0;
};

/// Non-paralyzable dead-time saturation R / (1 + R tau).
double saturate(double rate_cps, double dead_time_s);

/// Uncorrelated-coincidence rate R_s R_i tau.
double accidental_rate(double singles_s_cps, double singles_i_cps,
                       double coincidence_window_s);

/// Closed-form rate model. Per-arm arrival rates are
/// R eta T + dark (T = analyzer transmission), saturated per channel;
/// true pairs R eta_s eta_i T^2 (cw pump, unit window capture) lose the
/// per-channel dead fractions in the detected two-fold rate; accidentals are
/// formed from the saturated singles; accidental coincidences dilute the
/// fidelity toward 1/4. state_visibility maps to F = (1 + V)/2.
RateReport analytic_rates(double power_mw, const SourceBrightness& source,
                          const DetectionConfig& det, double state_visibility);

struct SweepEntry {
  double coincidence_window_s = 0.0;
  RateReport rates;
};

/// analytic_rates over the power grid for each coincidence window.
std::vector<SweepEntry> power_sweep(const std::vector<double>& powers_mw,
                                    const SourceBrightness& source,
                                    const DetectionConfig& det,
                                    const std::vector<double>& windows_s,
                                    double state_visibility);

enum class Channel { Signal, Idler };

struct TimeTagStream {
  Channel channel = Channel::Signal;
  std::vector<double> timestamps_s;  // strictly increasing
  std::uint64_t seed = 0;
};

/// Time-tag Monte Carlo of the same detection model: Poisson pair emission,
/// independent per-arm survival eta T, Poisson dark counts, non-paralyzable
/// dead-time pruning. Reproducible for a given seed (the sampler uses its own
/// exponential inversion, so streams are identical across platforms).
std::pair<TimeTagStream, TimeTagStream> simulate_timetags(
    double power_mw, const SourceBrightness& source, const DetectionConfig& det,
    double duration_s, std::uint64_t seed);

/// Greedy one-to-one nearest matching: events of a paired with the nearest
/// unconsumed event of b within +/- window/2. Streams must be sorted.
std::size_t count_coincidences(const TimeTagStream& a, const TimeTagStream& b,
                               double coincidence_window_s);

struct DetectionCalibration {
  SourceBrightness brightness;
  double eta_s = 0.0;
  double eta_i = 0.0;
};

/// Solves brightness and the two path efficiencies so that analytic_rates
/// reproduces the measured singles and two-fold rates at the given power
/// (dead time, darks, window and analyzer transmission taken from base).
DetectionCalibration calibrate_detection(double singles_s_cps,
                                         double singles_i_cps,
                                         double twofold_cps, double power_mw,
                                         const DetectionConfig& base);

}  // namespace spdckit
