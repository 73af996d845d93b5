// Batch front end for the source-design toolkit. Subcommands cover the phase
// map, compensator design, polarization correlations, rate curves, the
// time-tag Monte Carlo and the temperature budgets; outputs are plot-ready
// CSV/JSON tables with a reproducibility header.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spdckit/config.hpp"
#include "spdckit/io.hpp"
#include "spdckit/version.hpp"

using namespace spdckit;
using nlohmann::json;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  OutputMeta meta;
};

SourceConfig load_config(GlobalArgs& g) {
  if (g.config_path.empty()) {
    const char* env = std::getenv("SPDCKIT_CONFIG");
    if (env != nullptr) g.config_path = env;
  }
  if (g.config_path.empty())
    throw std::invalid_argument(
        "no configuration: pass --config PATH or set SPDCKIT_CONFIG");
  const std::string bytes = read_file(g.config_path);
  g.meta.config_hash = config_hash(bytes);
  return source_config_from_json_string(bytes);
}

std::string join_command_line(int argc, char** argv) {
  std::ostringstream out;
  for (int k = 0; k < argc; ++k) {
    if (k) out << ' ';
    out << argv[k];
  }
  return out.str();
}

void require_out(const GlobalArgs& g) {
  if (g.out_path.empty())
    throw std::invalid_argument("this command writes a file: pass --out PATH");
}

// filtered band around the filter center, wide enough for gaussian tails
std::vector<double> state_grid(const SourceConfig& cfg, int n = 201) {
  return linspace_window(cfg.filter.center_nm, 1.25 * cfg.filter.fwhm_nm, n);
}

struct BuiltState {
  DensityMatrix rho;
  double coherence_magnitude;
};

BuiltState build_configured_state(const MaterialLibrary& lib,
                                  const SourceConfig& cfg) {
  const auto grid = state_grid(cfg);
  const auto spectrum = joint_spectrum(lib, cfg.pump_nm, cfg.ktp_temperature_c,
                                       cfg.crystal, grid);
  const auto map = state_phase_map(lib, cfg, grid);
  const auto d =
      spectral_coherence(grid, map.phase_rad, spectrum.intensity, cfg.filter);
  return {build_state(grid, map.phase_rad, spectrum.intensity, cfg.filter,
                      cfg.balance),
          std::abs(d)};
}

void dump_json_doc(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << doc.dump(2) << "\n";
}

json meta_json(const OutputMeta& meta) {
  return json{{"tool", "spdckit"},
              {"version", SPDCKIT_VERSION},
              {"config_hash", meta.config_hash},
              {"command", meta.command_line}};
}

// ---------------------------------------------------------------------------

int cmd_phase_map(GlobalArgs& g, double window_nm, int grid_n,
                  bool uncompensated, bool full_grid) {
  const auto cfg = load_config(g);
  const auto& lib = MaterialLibrary::builtin();

  PhaseMap map;
  if (full_grid) {
    const auto sgrid = linspace_window(cfg.signal_nm, window_nm, grid_n);
    const auto igrid = linspace_window(cfg.idler_nm, window_nm, grid_n);
    CompensatorSpec comp = cfg.compensator;
    if (uncompensated) comp.length_mm = 0.0;
    map = grid_phase_map(lib, sgrid, igrid, cfg.crystal, cfg.waveplate, comp,
                         cfg.ktp_temperature_c, true);
  } else {
    const auto sgrid = linspace_window(cfg.signal_nm, window_nm, grid_n);
    map = total_phase_map(lib, cfg, sgrid, !uncompensated, true);
  }

  require_out(g);
  if (g.format == "json")
    write_phase_map_json(g.out_path, map, g.meta);
  else
    write_phase_map_csv(g.out_path, map, g.meta);

  const auto rep = flatness(map, Weighting::Uniform);
  std::cout << (uncompensated ? "uncompensated" : "compensated")
            << " phase over signal " << rep.signal_window_nm[0] << ".."
            << rep.signal_window_nm[1] << " nm: peak-to-peak "
            << rep.peak_to_peak_rad << " rad, rms " << rep.rms_rad << " rad\n";
  std::cout << "wrote " << g.out_path << "\n";
  return 0;
}

int cmd_optimize(GlobalArgs& g, double window_nm, int grid_n,
                 const std::string& weighting) {
  const auto cfg = load_config(g);
  const auto& lib = MaterialLibrary::builtin();
  const auto window = linspace_window(cfg.signal_nm, window_nm, grid_n);

  std::vector<std::pair<std::string, CompensatorDesign>> designs;
  const bool want_p2p = weighting == "p2p" || weighting == "all";
  const bool want_rms = weighting == "rms" || weighting == "all";
  if (!want_p2p && !want_rms)
    throw std::invalid_argument("--weighting must be p2p, rms or all");

  std::vector<double> weights;
  if (want_rms) {
    const auto spectrum = joint_spectrum(
        lib, cfg.pump_nm, cfg.ktp_temperature_c, cfg.crystal, window);
    weights.reserve(window.size());
    for (std::size_t k = 0; k < window.size(); ++k)
      weights.push_back(spectrum.intensity[k] *
                        cfg.filter.transmission(window[k]));
  }

  if (want_p2p)
    designs.emplace_back(
        "p2p", optimize_compensator_length(lib, cfg.pump_nm, window,
                                           cfg.crystal, cfg.waveplate,
                                           cfg.ktp_temperature_c,
                                           cfg.compensator.temperature_c,
                                           Weighting::Uniform));
  if (want_rms)
    designs.emplace_back(
        "rms", optimize_compensator_length(lib, cfg.pump_nm, window,
                                           cfg.crystal, cfg.waveplate,
                                           cfg.ktp_temperature_c,
                                           cfg.compensator.temperature_c,
                                           Weighting::Spectrum, &weights));

  const auto before = flatness(
      total_phase_map(lib, cfg, window, false, true), Weighting::Uniform);

  json out{{"meta", meta_json(g.meta)},
           {"window_half_width_nm", window_nm},
           {"uncompensated",
            {{"peak_to_peak_rad", before.peak_to_peak_rad},
             {"rms_rad", before.rms_rad}}}};
  for (const auto& [name, design] : designs) {
    out["designs"][name] = {
        {"length_mm", design.length_mm},
        {"peak_to_peak_rad", design.report.peak_to_peak_rad},
        {"rms_rad", design.report.rms_rad}};
    std::cout << name << ": optimal compensator " << design.length_mm
              << " mm, residual peak-to-peak " << design.report.peak_to_peak_rad
              << " rad (uncompensated " << before.peak_to_peak_rad << ")\n";
  }

  require_out(g);
  if (g.format == "json") {
    dump_json_doc(g.out_path, out);
  } else {
    std::ofstream csv(g.out_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open '" + g.out_path + "'");
    csv << std::setprecision(15);
    csv << "# spdckit " << SPDCKIT_VERSION << "\n";
    csv << "# config_hash=" << g.meta.config_hash << "\n";
    csv << "# command=" << g.meta.command_line << "\n";
    csv << "objective,length_mm,peak_to_peak_rad,rms_rad\n";
    csv << "uncompensated,0," << before.peak_to_peak_rad << ","
        << before.rms_rad << "\n";
    for (const auto& [name, design] : designs)
      csv << name << "," << design.length_mm << ","
          << design.report.peak_to_peak_rad << "," << design.report.rms_rad
          << "\n";
  }
  std::cout << "wrote " << g.out_path << "\n";
  return 0;
}

int cmd_correlations(GlobalArgs& g, std::vector<double> theta_b_list,
                     double step_deg) {
  const auto cfg = load_config(g);
  const auto& lib = MaterialLibrary::builtin();
  const auto state = build_configured_state(lib, cfg);

  if (theta_b_list.empty()) theta_b_list = {0.0, 90.0, 45.0, -45.0};
  std::vector<double> theta_a;
  for (double a = 0.0; a < 180.0; a += step_deg) theta_a.push_back(a);

  json fits = json::array();
  std::ostringstream csv_rows;
  csv_rows << std::setprecision(15);
  for (double tb : theta_b_list) {
    const auto curve = correlation_scan(state.rho, tb, theta_a);
    const auto fit = fit_visibility(theta_a, curve);
    fits.push_back({{"theta_b_deg", tb},
                    {"visibility", fit.visibility},
                    {"theta0_deg", fit.theta0_deg},
                    {"amplitude", fit.amplitude},
                    {"residual_rms", fit.residual_rms}});
    std::cout << "theta_B = " << std::setw(6) << tb
              << " deg: fitted V = " << fit.visibility << " (axis "
              << fit.theta0_deg << " deg)\n";
    for (std::size_t k = 0; k < theta_a.size(); ++k)
      csv_rows << tb << "," << theta_a[k] << "," << curve[k] << "\n";
  }

  // exact-projection visibilities in the three mutually unbiased bases
  auto vis = [&](const AnalyzerSetting& a0, const AnalyzerSetting& a1,
                 const AnalyzerSetting& b0, const AnalyzerSetting& b1) {
    const double nii = coincidence_probability(state.rho, a0, b0);
    const double njj = coincidence_probability(state.rho, a1, b1);
    const double nij = coincidence_probability(state.rho, a0, b1);
    const double nji = coincidence_probability(state.rho, a1, b0);
    return (nii + njj - nij - nji) / (nii + njj + nij + nji);
  };
  VisibilitySet v;
  v.v_hv = vis(AnalyzerSetting::linear(0.0), AnalyzerSetting::linear(90.0),
               AnalyzerSetting::linear(0.0), AnalyzerSetting::linear(90.0));
  v.v_da = vis(AnalyzerSetting::linear(45.0), AnalyzerSetting::linear(-45.0),
               AnalyzerSetting::linear(45.0), AnalyzerSetting::linear(-45.0));
  v.v_lr = vis(AnalyzerSetting::left(), AnalyzerSetting::right(),
               AnalyzerSetting::left(), AnalyzerSetting::right());
  const double f_witness = fidelity_witness(v, BellState::PhiPlus);
  const double f_direct = fidelity_from_state(state.rho, BellState::PhiPlus);

  std::cout << "spectral coherence |D| = " << state.coherence_magnitude
            << "\n";
  std::cout << "V_HV = " << v.v_hv << ", V_DA = " << v.v_da
            << ", V_LR = " << v.v_lr << "\n";
  std::cout << "witness fidelity (Phi+) = " << f_witness
            << ", direct = " << f_direct << "\n";

  require_out(g);
  if (g.format == "json") {
    dump_json_doc(g.out_path,
                  json{{"meta", meta_json(g.meta)},
                       {"fits", fits},
                       {"visibilities",
                        {{"v_hv", v.v_hv}, {"v_da", v.v_da}, {"v_lr", v.v_lr}}},
                       {"fidelity_witness", f_witness},
                       {"fidelity_direct", f_direct},
                       {"coherence_magnitude", state.coherence_magnitude}});
  } else {
    std::ofstream csv(g.out_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open '" + g.out_path + "'");
    csv << std::setprecision(15);
    csv << "# spdckit " << SPDCKIT_VERSION << "\n";
    csv << "# config_hash=" << g.meta.config_hash << "\n";
    csv << "# command=" << g.meta.command_line << "\n";
    csv << "# witness_fidelity=" << f_witness << "\n";
    csv << "theta_b_deg,theta_a_deg,probability\n" << csv_rows.str();
  }
  std::cout << "wrote " << g.out_path << "\n";
  return 0;
}

int cmd_rates(GlobalArgs& g, const std::vector<double>& powers_mw,
              std::vector<double> windows_ns) {
  const auto cfg = load_config(g);
  const auto& lib = MaterialLibrary::builtin();
  if (powers_mw.empty())
    throw std::invalid_argument("rates: pass at least one --powers value");
  if (windows_ns.empty())
    windows_ns = {cfg.detection.coincidence_window_s * 1e9};

  const auto state = build_configured_state(lib, cfg);
  std::vector<double> windows_s;
  for (double w : windows_ns) windows_s.push_back(w * 1e-9);

  const auto rows = power_sweep(powers_mw, cfg.brightness, cfg.detection,
                                windows_s, state.coherence_magnitude);
  require_out(g);
  if (g.format == "json")
    write_rate_table_json(g.out_path, rows, g.meta);
  else
    write_rate_table_csv(g.out_path, rows, g.meta);

  for (const auto& row : rows)
    std::cout << row.rates.power_mw * 1e3 << " uW @ "
              << row.coincidence_window_s * 1e9
              << " ns: twofold = " << row.rates.detected_twofold_cps
              << " cps, raw fidelity = " << row.rates.raw_fidelity << "\n";
  std::cout << "wrote " << g.out_path << "\n";
  return 0;
}

int cmd_montecarlo(GlobalArgs& g, double power_mw, double duration_s,
                   std::uint64_t seed, const std::string& dump_tags) {
  const auto cfg = load_config(g);
  const auto& lib = MaterialLibrary::builtin();
  const auto state = build_configured_state(lib, cfg);

  const auto [sig, idl] = simulate_timetags(power_mw, cfg.brightness,
                                            cfg.detection, duration_s, seed);
  const double tau = cfg.detection.coincidence_window_s;
  const auto coincidences = count_coincidences(sig, idl, tau);

  // delayed-window accidental estimate: shift one stream far outside any
  // correlation but keep the rates
  TimeTagStream shifted = idl;
  for (double& t : shifted.timestamps_s) t += 10e-6;
  const auto accidental_counts = count_coincidences(sig, shifted, tau);

  const auto expect =
      analytic_rates(power_mw, cfg.brightness, cfg.detection,
                     state.coherence_magnitude);

  struct Row {
    const char* name;
    double mc;
    double analytic;
  };
  const Row rows[] = {
      {"singles_s", static_cast<double>(sig.timestamps_s.size()),
       expect.singles_s_cps * duration_s},
      {"singles_i", static_cast<double>(idl.timestamps_s.size()),
       expect.singles_i_cps * duration_s},
      {"coincidences", static_cast<double>(coincidences),
       expect.detected_twofold_cps * duration_s},
      {"accidentals", static_cast<double>(accidental_counts),
       expect.accidentals_cps * duration_s}};

  json table = json::array();
  bool all_within = true;
  for (const auto& row : rows) {
    const double sigma = std::sqrt(std::max(row.analytic, 1.0));
    const double pull = (row.mc - row.analytic) / sigma;
    all_within = all_within && std::abs(pull) <= 3.0;
    table.push_back({{"quantity", row.name},
                     {"monte_carlo", row.mc},
                     {"analytic", row.analytic},
                     {"sigma", sigma},
                     {"pull", pull}});
    std::cout << std::setw(13) << row.name << ": MC " << std::setw(12)
              << row.mc << "  analytic " << std::setw(14) << row.analytic
              << "  pull " << std::setprecision(3) << pull
              << std::setprecision(6) << "\n";
  }
  std::cout << (all_within ? "all quantities within 3 sigma\n"
                           : "WARNING: deviation beyond 3 sigma\n");

  require_out(g);
  const json doc{{"meta", meta_json(g.meta)},
                 {"power_mw", power_mw},
                 {"duration_s", duration_s},
                 {"seed", seed},
                 {"comparison", table},
                 {"within_3_sigma", all_within}};
  if (g.format == "json") {
    dump_json_doc(g.out_path, doc);
  } else {
    std::ofstream csv(g.out_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open '" + g.out_path + "'");
    csv << std::setprecision(15);
    csv << "# spdckit " << SPDCKIT_VERSION << "\n";
    csv << "# config_hash=" << g.meta.config_hash << "\n";
    csv << "# command=" << g.meta.command_line << "\n";
    csv << "quantity,monte_carlo,analytic,sigma,pull\n";
    for (const auto& row : table)
      csv << row.at("quantity").get<std::string>() << ","
          << row.at("monte_carlo").get<double>() << ","
          << row.at("analytic").get<double>() << ","
          << row.at("sigma").get<double>() << ","
          << row.at("pull").get<double>() << "\n";
  }
  if (!dump_tags.empty()) write_timetags_csv(dump_tags, sig, idl, g.meta);
  std::cout << "wrote " << g.out_path << "\n";
  return 0;
}

int cmd_temperature(GlobalArgs& g, const std::string& element,
                    double fidelity_target) {
  const auto cfg = load_config(g);
  const auto& lib = MaterialLibrary::builtin();

  double shift_per_k = 0.0;
  double dt_max = 0.0;
  if (element == "yvo") {
    shift_per_k = temperature_phase_shift(lib, cfg.compensator, 1.0,
                                          cfg.signal_nm, cfg.idler_nm);
    dt_max = temperature_tolerance(lib, cfg.compensator, fidelity_target,
                                   cfg.signal_nm, cfg.idler_nm);
  } else if (element == "ktp") {
    const double h = 0.5;
    auto phase = [&](double t) {
      const double br_s = lib.birefringence(Material::Ktp, cfg.signal_nm, t);
      const double br_i = lib.birefringence(Material::Ktp, cfg.idler_nm, t);
      return 2.0 * std::numbers::pi * 2.0 * cfg.crystal.length_mm * 1e6 *
             (br_s / cfg.signal_nm + br_i / cfg.idler_nm);
    };
    shift_per_k = (phase(cfg.ktp_temperature_c + h) -
                   phase(cfg.ktp_temperature_c - h)) /
                  (2.0 * h);
    dt_max = temperature_tolerance(lib, cfg.crystal, cfg.ktp_temperature_c,
                                   fidelity_target, cfg.signal_nm,
                                   cfg.idler_nm);
  } else {
    throw std::invalid_argument("--element must be yvo or ktp");
  }

  const double dt_pi = std::numbers::pi / std::abs(shift_per_k);
  std::cout << element << ": phase shift " << shift_per_k
            << " rad/K, pi flip at dT = " << dt_pi << " K\n";
  std::cout << "keeping fidelity >= " << fidelity_target
            << " needs |dT| <= " << dt_max << " K\n";

  if (!g.out_path.empty()) {
    dump_json_doc(g.out_path, json{{"meta", meta_json(g.meta)},
                                   {"element", element},
                                   {"phase_shift_rad_per_k", shift_per_k},
                                   {"dt_pi_k", dt_pi},
                                   {"fidelity_target", fidelity_target},
                                   {"dt_max_k", dt_max}});
    std::cout << "wrote " << g.out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"folded-sandwich down-conversion source design toolkit"};
  app.set_version_flag("--version", SPDCKIT_VERSION);
  app.require_subcommand(1);

  GlobalArgs g;
  g.meta.command_line = join_command_line(argc, argv);
  app.add_option("--config", g.config_path,
                 "source configuration JSON (or set SPDCKIT_CONFIG)");
  app.add_option("--out", g.out_path, "output file path");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  // phase-map
  double window_nm = 1.75;
  int grid_n = 81;
  bool uncompensated = false;
  bool full_grid = false;
  auto* pm = app.add_subcommand("phase-map",
                                "relative phase over the spectral window");
  pm->add_option("--window", window_nm, "half width of the window, nm");
  pm->add_option("--grid", grid_n, "points per axis")->check(CLI::Range(1, 100000));
  pm->add_flag("--uncompensated", uncompensated,
               "drop the compensation crystal");
  pm->add_flag("--full-grid", full_grid, "full 2-D signal x idler map");

  // optimize
  double opt_window = 1.75;
  int opt_grid = 41;
  std::string weighting = "p2p";
  auto* opt = app.add_subcommand("optimize", "design the compensator length");
  opt->add_option("--window", opt_window, "half width of the window, nm");
  opt->add_option("--grid", opt_grid, "window samples")->check(CLI::Range(1, 100000));
  opt->add_option("--weighting", weighting, "objective: p2p, rms or all");

  // correlations
  std::vector<double> theta_b_list;
  double step_deg = 5.0;
  auto* corr = app.add_subcommand("correlations",
                                  "polarizer scans, visibilities, witness");
  corr->add_option("--basis-angle", theta_b_list,
                   "fixed analyzer angles, deg (default 0 90 45 -45)");
  corr->add_option("--step", step_deg, "scan step, deg")
      ->check(CLI::Range(0.1, 45.0));

  // rates
  std::vector<double> powers_mw;
  std::vector<double> windows_ns;
  auto* rates = app.add_subcommand("rates", "rate and fidelity vs pump power");
  rates->add_option("--powers", powers_mw, "pump powers, mW");
  rates->add_option("--windows", windows_ns, "coincidence windows, ns");

  // montecarlo
  double mc_power = 0.0104;
  double mc_duration = 1.0;
  std::uint64_t mc_seed = 1;
  std::string dump_tags;
  auto* mc = app.add_subcommand("montecarlo",
                                "time-tag simulation vs the closed form");
  mc->add_option("--power", mc_power, "pump power, mW");
  mc->add_option("--duration", mc_duration, "simulated time, s");
  mc->add_option("--seed", mc_seed, "random seed");
  mc->add_option("--dump-tags", dump_tags, "also write the raw time tags");

  // temperature
  std::string element = "yvo";
  double fidelity_target = 0.995;
  auto* temp = app.add_subcommand("temperature",
                                  "thermal phase shifts and oven budgets");
  temp->add_option("--element", element, "yvo or ktp");
  temp->add_option("--fidelity-target", fidelity_target,
                   "fidelity floor for the budget");

  // global flags may follow the subcommand
  for (auto* sub : {pm, opt, corr, rates, mc, temp}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    std::cout << std::setprecision(6);
    if (pm->parsed())
      return cmd_phase_map(g, window_nm, grid_n, uncompensated, full_grid);
    if (opt->parsed()) return cmd_optimize(g, opt_window, opt_grid, weighting);
    if (corr->parsed()) return cmd_correlations(g, theta_b_list, step_deg);
    if (rates->parsed()) return cmd_rates(g, powers_mw, windows_ns);
    if (mc->parsed())
      return cmd_montecarlo(g, mc_power, mc_duration, mc_seed, dump_tags);
    if (temp->parsed()) return cmd_temperature(g, element, fidelity_target);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error (usage/config): " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error (domain): " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error (domain): " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error (numeric): " << e.what() << "\n";
    return 4;
  }
}
