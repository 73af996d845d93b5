#include <cmath>
#include <limits>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "spdckit/counting.hpp"

using namespace spdckit;

namespace {

// detection setup used by the shipped example configuration
DetectionConfig paper_detection() {
  DetectionConfig d;
  d.eta_s = 0.149736374845;
  d.eta_i = 0.216634038880;
  d.dark_s_cps = 300.0;
  d.dark_i_cps = 300.0;
  d.coincidence_window_s = 3.2e-9;
  d.dead_time_s = 50e-9;
  d.analyzer_transmission = 0.9;
  return d;
}

const SourceBrightness kPaperSource{4.3442888805e7, 2.9};

}  // namespace

TEST_CASE("dead-time saturation") {
  CHECK(saturate(123456.0, 0.0) == 123456.0);
  CHECK(saturate(1.0 / 50e-9, 50e-9) == doctest::Approx(0.5 / 50e-9));

  SUBCASE("monotone, concave, bounded by the inverse dead time") {
    const double tau = 50e-9;
    double prev_r = 0.0;
    double prev = 0.0;
    double prev_gain = std::numeric_limits<double>::infinity();
    for (double r = 1e4; r <= 1e9; r *= 1.3) {
      const double s = saturate(r, tau);
      CHECK(s > prev);
      CHECK(s <= 1.0 / tau);
      const double gain = (s - prev) / (r - prev_r);
      CHECK(gain <= prev_gain + 1e-15);
      prev_r = r;
      prev = s;
      prev_gain = gain;
    }
  }

  CHECK_THROWS_AS(saturate(-1.0, 0.0), std::domain_error);
}

TEST_CASE("accidental rate") {
  CHECK(accidental_rate(61000.0, 88000.0, 0.0) == 0.0);
  CHECK(accidental_rate(61000.0, 88000.0, 3.2e-9) ==
        doctest::Approx(17.1776).epsilon(1e-6));
  // bilinear: doubling both singles quadruples the rate
  CHECK(accidental_rate(2 * 61000.0, 2 * 88000.0, 3.2e-9) ==
        doctest::Approx(4.0 * 17.1776).epsilon(1e-9));
}

TEST_CASE("analytic rates") {
  const auto det = paper_detection();

  SUBCASE("zero power leaves darks and dark accidentals") {
    const auto r = analytic_rates(0.0, kPaperSource, det, 0.9999);
    CHECK(r.singles_s_cps == doctest::Approx(saturate(300.0, det.dead_time_s)));
    CHECK(r.singles_i_cps == doctest::Approx(saturate(300.0, det.dead_time_s)));
    CHECK(r.true_coincidences_cps == 0.0);
    CHECK(r.detected_twofold_cps ==
          doctest::Approx(accidental_rate(r.singles_s_cps, r.singles_i_cps,
                                          det.coincidence_window_s)));
  }

  SUBCASE("calibrated operating point") {
    const auto r = analytic_rates(0.0104, kPaperSource, det, 0.9999);
    CHECK(r.singles_s_cps == doctest::Approx(61000.0).epsilon(1e-6));
    CHECK(r.singles_i_cps == doctest::Approx(88000.0).epsilon(1e-6));
    CHECK(r.detected_twofold_cps == doctest::Approx(11800.0).epsilon(1e-6));
    CHECK(r.accidentals_cps == doctest::Approx(17.1776).epsilon(1e-4));
    CHECK(r.detected_twofold_cps <=
          std::min(r.singles_s_cps, r.singles_i_cps));
  }

  SUBCASE("fidelity approaches the state fidelity in the dark-free limit") {
    DetectionConfig clean = det;
    clean.dark_s_cps = clean.dark_i_cps = 0.0;
    const double v = 0.987;
    const auto at_zero = analytic_rates(0.0, kPaperSource, clean, v);
    CHECK(at_zero.raw_fidelity == 0.5 * (1.0 + v));
    const auto tiny = analytic_rates(1e-12, kPaperSource, clean, v);
    CHECK(tiny.raw_fidelity == doctest::Approx(0.5 * (1.0 + v)).epsilon(1e-9));
  }

  CHECK_THROWS_AS(analytic_rates(-1.0, kPaperSource, det, 0.99),
                  std::domain_error);
}

TEST_CASE("power sweep") {
  const auto det = paper_detection();

  SUBCASE("a single power and window wraps one report") {
    const auto rows =
        power_sweep({0.0104}, kPaperSource, det, {3.2e-9}, 0.9999);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rates.detected_twofold_cps ==
          doctest::Approx(11800.0).epsilon(1e-6));
  }

  SUBCASE("two-fold rate is linear in power over the first decade to 2%") {
    std::vector<double> powers;
    for (double p = 0.001; p <= 0.0101; p += 0.0005) powers.push_back(p);
    const auto rows = power_sweep(powers, kPaperSource, det, {3.2e-9}, 0.9999);
    const double slope0 =
        rows.front().rates.detected_twofold_cps / powers.front();
    for (const auto& row : rows) {
      const double slope = row.rates.detected_twofold_cps / row.rates.power_mw;
      CHECK(slope == doctest::Approx(slope0).epsilon(0.02));
    }
  }

  SUBCASE("raw fidelity never rises with power") {
    std::vector<double> powers;
    for (double p = 0.001; p <= 3.0; p *= 1.5) powers.push_back(p);
    for (double w : {0.5e-9, 3.2e-9}) {
      const auto rows = power_sweep(powers, kPaperSource, det, {w}, 0.9999);
      for (std::size_t k = 1; k < rows.size(); ++k)
        CHECK(rows[k].rates.raw_fidelity <=
              rows[k - 1].rates.raw_fidelity + 1e-12);
    }
  }

  SUBCASE("the faster window dominates pointwise") {
    std::vector<double> powers;
    for (double p = 0.001; p <= 3.0; p *= 2.0) powers.push_back(p);
    const auto rows =
        power_sweep(powers, kPaperSource, det, {0.5e-9, 3.2e-9}, 0.9999);
    const std::size_t n = powers.size();
    for (std::size_t k = 0; k < n; ++k)
      CHECK(rows[k].rates.raw_fidelity >= rows[n + k].rates.raw_fidelity);
  }

  CHECK_THROWS_AS(power_sweep({}, kPaperSource, det, {3.2e-9}, 0.99),
                  std::invalid_argument);
  CHECK_THROWS_AS(power_sweep({0.01}, kPaperSource, det, {}, 0.99),
                  std::invalid_argument);
}

TEST_CASE("time-tag simulation") {
  SUBCASE("perfect detection keeps both members of every pair") {
    DetectionConfig perfect;
    perfect.coincidence_window_s = 1e-9;
    const auto [s, i] =
        simulate_timetags(0.001, {1e6, 2.9}, perfect, 1.0, 42);
    REQUIRE(s.timestamps_s.size() == i.timestamps_s.size());
    CHECK(s.timestamps_s == i.timestamps_s);
    CHECK(s.timestamps_s.size() > 700);  // ~1000 expected
  }

  SUBCASE("identical seeds give identical streams") {
    const auto det = paper_detection();
    const auto a = simulate_timetags(0.0104, kPaperSource, det, 1.0, 7);
    const auto b = simulate_timetags(0.0104, kPaperSource, det, 1.0, 7);
    CHECK(a.first.timestamps_s == b.first.timestamps_s);
    CHECK(a.second.timestamps_s == b.second.timestamps_s);
    const auto c = simulate_timetags(0.0104, kPaperSource, det, 1.0, 8);
    CHECK(a.first.timestamps_s != c.first.timestamps_s);
  }

  SUBCASE("streams are strictly increasing") {
    const auto det = paper_detection();
    const auto [s, i] = simulate_timetags(0.0104, kPaperSource, det, 2.0, 3);
    for (std::size_t k = 1; k < s.timestamps_s.size(); ++k)
      CHECK(s.timestamps_s[k] > s.timestamps_s[k - 1]);
    for (std::size_t k = 1; k < i.timestamps_s.size(); ++k)
      CHECK(i.timestamps_s[k] > i.timestamps_s[k - 1]);
  }

  SUBCASE("singles agree with the closed form within 3 sigma") {
    const auto det = paper_detection();
    const double duration = 10.0;
    const auto r = analytic_rates(0.0104, kPaperSource, det, 0.9999);
    const auto [s, i] =
        simulate_timetags(0.0104, kPaperSource, det, duration, 2024);
    const double expect_s = r.singles_s_cps * duration;
    const double expect_i = r.singles_i_cps * duration;
    CHECK(std::abs(s.timestamps_s.size() - expect_s) <
          3.0 * std::sqrt(expect_s));
    CHECK(std::abs(i.timestamps_s.size() - expect_i) <
          3.0 * std::sqrt(expect_i));
  }

  CHECK_THROWS_AS(simulate_timetags(0.01, kPaperSource, paper_detection(),
                                    0.0, 1),
                  std::invalid_argument);
}

TEST_CASE("coincidence counting") {
  SUBCASE("identical streams all match") {
    TimeTagStream a{Channel::Signal, {0.1, 0.2, 0.3, 0.4}, 0};
    TimeTagStream b{Channel::Idler, {0.1, 0.2, 0.3, 0.4}, 0};
    CHECK(count_coincidences(a, b, 1e-6) == 4);
    CHECK(count_coincidences(a, b, 0.0) == 0);
  }

  SUBCASE("one-to-one consumption") {
    TimeTagStream a{Channel::Signal, {0.0, 1e-10, 2e-10}, 0};
    TimeTagStream b{Channel::Idler, {0.0}, 0};
    CHECK(count_coincidences(a, b, 1e-9) == 1);
  }

  SUBCASE("nearest unconsumed tag wins") {
    TimeTagStream a{Channel::Signal, {1.00e-6, 1.10e-6}, 0};
    TimeTagStream b{Channel::Idler, {0.98e-6, 1.01e-6}, 0};
    // first a grabs 1.01e-6 (nearest), second a finds nothing in +/-25 ns
    CHECK(count_coincidences(a, b, 50e-9) == 1);
    // a wider window lets the second a fall back to the earlier tag
    CHECK(count_coincidences(a, b, 500e-9) == 2);
  }

  SUBCASE("unsorted input is rejected") {
    TimeTagStream bad{Channel::Signal, {0.2, 0.1}, 0};
    TimeTagStream ok{Channel::Idler, {0.1}, 0};
    CHECK_THROWS_AS(count_coincidences(bad, ok, 1e-9), std::invalid_argument);
  }

  SUBCASE("independent streams reproduce the accidental formula") {
    DetectionConfig det;
    det.dark_s_cps = 50000.0;  // pure dark-count processes
    det.dark_i_cps = 80000.0;
    det.coincidence_window_s = 100e-9;
    const double duration = 10.0;
    const auto [s, i] = simulate_timetags(0.0, {0.0, 2.9}, det, duration, 99);
    const double expected = accidental_rate(50000.0, 80000.0, 100e-9) * duration;
    const double got = static_cast<double>(
        count_coincidences(s, i, det.coincidence_window_s));
    CHECK(std::abs(got - expected) < 3.0 * std::sqrt(expected));
  }
}

TEST_CASE("detection calibration closes the loop") {
  DetectionConfig base = paper_detection();
  const auto cal =
      calibrate_detection(61000.0, 88000.0, 11800.0, 0.0104, base);

  CHECK(cal.brightness.pairs_per_mw ==
        doctest::Approx(4.3442888805e7).epsilon(1e-9));
  CHECK(cal.eta_s == doctest::Approx(0.149736374845).epsilon(1e-9));
  CHECK(cal.eta_i == doctest::Approx(0.216634038880).epsilon(1e-9));

  DetectionConfig det = base;
  det.eta_s = cal.eta_s;
  det.eta_i = cal.eta_i;
  SourceBrightness src = cal.brightness;
  src.spectral_fwhm_nm = 2.9;
  const auto r = analytic_rates(0.0104, src, det, 0.9999);
  CHECK(r.singles_s_cps == doctest::Approx(61000.0).epsilon(1e-9));
  CHECK(r.singles_i_cps == doctest::Approx(88000.0).epsilon(1e-9));
  CHECK(r.detected_twofold_cps == doctest::Approx(11800.0).epsilon(1e-9));

  CHECK_THROWS_AS(calibrate_detection(61000.0, 88000.0, 0.0001, 0.0104, base),
                  std::domain_error);
}
