#include "spdckit/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spdckit {

namespace {

// 53-bit uniform in [0, 1) from splitmix64; self-contained so that streams
// are bit-identical across standard libraries.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double exponential_gap(double rate) {
    // -log(1-u) with u in [0,1); never log(0)
    return -std::log1p(-uniform()) / rate;
  }
};

std::vector<double> poisson_times(Rng& rng, double rate, double duration_s) {
  std::vector<double> t;
  if (rate <= 0.0) return t;
  t.reserve(static_cast<std::size_t>(rate * duration_s * 1.1) + 16);
  double now = 0.0;
  for (;;) {
    now += rng.exponential_gap(rate);
    if (now >= duration_s) break;
    t.push_back(now);
  }
  return t;
}

std::vector<double> merge_sorted(const std::vector<double>& a,
                                 const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), out.begin());
  return out;
}

std::vector<double> prune_dead_time(const std::vector<double>& events,
                                    double dead_time_s) {
  if (dead_time_s <= 0.0 || events.empty()) return events;
  std::vector<double> kept;
  kept.reserve(events.size());
  double blocked_until = -std::numeric_limits<double>::infinity();
  for (double t : events) {
    if (t >= blocked_until) {
      kept.push_back(t);
      blocked_until = t + dead_time_s;
    }
  }
  return kept;
}

}  // namespace

double saturate(double rate_cps, double dead_time_s) {
  if (rate_cps < 0.0) throw std::domain_error("saturate: negative rate");
  if (dead_time_s < 0.0) throw std::domain_error("saturate: negative dead time");
  return rate_cps / (1.0 + rate_cps * dead_time_s);
}

double accidental_rate(double singles_s_cps, double singles_i_cps,
                       double coincidence_window_s) {
  if (singles_s_cps < 0.0 || singles_i_cps < 0.0)
    throw std::domain_error("accidental_rate: negative singles rate");
  return singles_s_cps * singles_i_cps * coincidence_window_s;
}

RateReport analytic_rates(double power_mw, const SourceBrightness& source,
                          const DetectionConfig& det,
                          double state_visibility) {
  if (power_mw < 0.0) throw std::domain_error("analytic_rates: negative power");

  RateReport r;
  r.power_mw = power_mw;
  const double pairs = power_mw * source.pairs_per_mw;
  const double t = det.analyzer_transmission;

  const double arrivals_s = pairs * det.eta_s * t + det.dark_s_cps;
  const double arrivals_i = pairs * det.eta_i * t + det.dark_i_cps;
  r.singles_s_cps = saturate(arrivals_s, det.dead_time_s);
  r.singles_i_cps = saturate(arrivals_i, det.dead_time_s);

  r.true_coincidences_cps = pairs * det.eta_s * det.eta_i * t * t;
  const double live_s = arrivals_s > 0.0 ? r.singles_s_cps / arrivals_s : 1.0;
  const double live_i = arrivals_i > 0.0 ? r.singles_i_cps / arrivals_i : 1.0;
  const double detected_true = r.true_coincidences_cps * live_s * live_i;

  r.accidentals_cps = accidental_rate(r.singles_s_cps, r.singles_i_cps,
                                      det.coincidence_window_s);
  r.detected_twofold_cps = detected_true + r.accidentals_cps;

  const double f_state = 0.5 * (1.0 + state_visibility);
  const double total = detected_true + r.accidentals_cps;
  r.raw_fidelity =
      total > 0.0
          ? (f_state * detected_true + 0.25 * r.accidentals_cps) / total
          : f_state;  // accidental-free limit
  return r;
}

std::vector<SweepEntry> power_sweep(const std::vector<double>& powers_mw,
                                    const SourceBrightness& source,
                                    const DetectionConfig& det,
                                    const std::vector<double>& windows_s,
                                    double state_visibility) {
  if (powers_mw.empty())
    throw std::invalid_argument("power_sweep: empty power list");
  if (windows_s.empty())
    throw std::invalid_argument("power_sweep: empty window list");

  std::vector<SweepEntry> rows;
  rows.reserve(powers_mw.size() * windows_s.size());
  for (double w : windows_s) {
    DetectionConfig d = det;
    d.coincidence_window_s = w;
    for (double p : powers_mw)
      rows.push_back({w, analytic_rates(p, source, d, state_visibility)});
  }
  return rows;
}

std::pair<TimeTagStream, TimeTagStream> simulate_timetags(
    double power_mw, const SourceBrightness& source, const DetectionConfig& det,
    double duration_s, std::uint64_t seed) {
  if (!(duration_s > 0.0))
    throw std::invalid_argument("simulate_timetags: duration must be > 0");

  // independent sub-generators so channel streams decouple
  Rng master(seed);
  Rng pair_rng(master.next_u64());
  Rng dark_s_rng(master.next_u64());
  Rng dark_i_rng(master.next_u64());

  const double pair_rate = power_mw * source.pairs_per_mw;
  const double keep_s = det.eta_s * det.analyzer_transmission;
  const double keep_i = det.eta_i * det.analyzer_transmission;

  std::vector<double> sig, idl;
  if (pair_rate > 0.0) {
    double now = 0.0;
    for (;;) {
      now += pair_rng.exponential_gap(pair_rate);
      if (now >= duration_s) break;
      const double us = pair_rng.uniform();
      const double ui = pair_rng.uniform();
      if (us < keep_s) sig.push_back(now);
      if (ui < keep_i) idl.push_back(now);
    }
  }

  sig = merge_sorted(sig, poisson_times(dark_s_rng, det.dark_s_cps, duration_s));
  idl = merge_sorted(idl, poisson_times(dark_i_rng, det.dark_i_cps, duration_s));
  sig = prune_dead_time(sig, det.dead_time_s);
  idl = prune_dead_time(idl, det.dead_time_s);

  TimeTagStream s{Channel::Signal, std::move(sig), seed};
  TimeTagStream i{Channel::Idler, std::move(idl), seed};
  return {std::move(s), std::move(i)};
}

std::size_t count_coincidences(const TimeTagStream& a, const TimeTagStream& b,
                               double coincidence_window_s) {
  if (!std::is_sorted(a.timestamps_s.begin(), a.timestamps_s.end()) ||
      !std::is_sorted(b.timestamps_s.begin(), b.timestamps_s.end()))
    throw std::invalid_argument("count_coincidences: streams must be sorted");
  if (coincidence_window_s <= 0.0) return 0;

  const double half = 0.5 * coincidence_window_s;
  const auto& tb = b.timestamps_s;
  std::vector<char> used(tb.size(), 0);
  std::size_t lo = 0;
  std::size_t count = 0;

  for (double t : a.timestamps_s) {
    while (lo < tb.size() && (used[lo] || tb[lo] < t - half)) ++lo;
    std::size_t best = tb.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = lo; k < tb.size() && tb[k] <= t + half; ++k) {
      if (used[k]) continue;
      const double d = std::abs(tb[k] - t);
      if (d < best_dist) {
        best_dist = d;
        best = k;
      }
      if (tb[k] >= t) break;  // distances only grow past t
    }
    if (best != tb.size()) {
      used[best] = 1;
      ++count;
    }
  }
  return count;
}

DetectionCalibration calibrate_detection(double singles_s_cps,
                                         double singles_i_cps,
                                         double twofold_cps, double power_mw,
                                         const DetectionConfig& base) {
  if (!(power_mw > 0.0) || !(twofold_cps > 0.0) || !(singles_s_cps > 0.0) ||
      !(singles_i_cps > 0.0))
    throw std::domain_error("calibrate_detection: rates and power must be > 0");

  // invert the saturation, remove darks and accidentals, then factor the
  // pair rate out of the singles product
  auto desaturate = [&](double rate) {
    const double denom = 1.0 - rate * base.dead_time_s;
    if (denom <= 0.0)
      throw std::domain_error(
          "calibrate_detection: singles exceed the dead-time ceiling");
    return rate / denom;
  };
  const double arrivals_s = desaturate(singles_s_cps);
  const double arrivals_i = desaturate(singles_i_cps);
  const double live = (singles_s_cps / arrivals_s) * (singles_i_cps / arrivals_i);
  const double acc = accidental_rate(singles_s_cps, singles_i_cps,
                                     base.coincidence_window_s);
  const double detected_true = twofold_cps - acc;
  if (detected_true <= 0.0)
    throw std::domain_error(
        "calibrate_detection: two-fold rate below the accidental floor");

  const double t = base.analyzer_transmission;
  const double flux_s = arrivals_s - base.dark_s_cps;  // pairs * eta_s * T
  const double flux_i = arrivals_i - base.dark_i_cps;
  if (flux_s <= 0.0 || flux_i <= 0.0)
    throw std::domain_error("calibrate_detection: singles below dark rate");

  const double true_unsat = detected_true / live;  // pairs * eta_s eta_i T^2
  const double pairs = flux_s * flux_i / true_unsat;

  DetectionCalibration cal;
  cal.brightness.pairs_per_mw = pairs / power_mw;
  cal.eta_s = flux_s / (pairs * t);
  cal.eta_i = flux_i / (pairs * t);
  return cal;
}

}  // namespace spdckit
