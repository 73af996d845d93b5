// Python bindings for the main design and simulation operations.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spdckit/config.hpp"
#include "spdckit/version.hpp"

namespace py = pybind11;
using namespace spdckit;

namespace {

SpectralFilter::Shape shape_from_string(const std::string& s) {
  if (s == "tophat") return SpectralFilter::Shape::Tophat;
  if (s == "gaussian") return SpectralFilter::Shape::Gaussian;
  throw std::invalid_argument("filter shape must be tophat or gaussian");
}

BellState bell_from_string(const std::string& s) {
  if (s == "phi+" || s == "PhiPlus") return BellState::PhiPlus;
  if (s == "phi-" || s == "PhiMinus") return BellState::PhiMinus;
  throw std::invalid_argument("target must be phi+ or phi-");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "folded-sandwich down-conversion source design toolkit";
  m.attr("__version__") = SPDCKIT_VERSION;

  py::enum_<Material>(m, "Material")
      .value("KTP", Material::Ktp)
      .value("YVO4", Material::Yvo4)
      .value("MgF2", Material::MgF2)
      .value("SiO2", Material::SiO2)
      .value("Air", Material::Air)
      .value("Vacuum", Material::Vacuum);

  py::enum_<Axis>(m, "Axis")
      .value("y", Axis::Y)
      .value("z", Axis::Z)
      .value("ordinary", Axis::Ordinary)
      .value("extraordinary", Axis::Extraordinary)
      .value("isotropic", Axis::Isotropic);

  py::class_<CrystalSpec>(m, "CrystalSpec")
      .def(py::init([](double length_mm, double poling_period_um) {
             return CrystalSpec{Material::Ktp, length_mm, poling_period_um};
           }),
           py::arg("length_mm"), py::arg("poling_period_um"))
      .def_readwrite("length_mm", &CrystalSpec::length_mm)
      .def_readwrite("poling_period_um", &CrystalSpec::poling_period_um);

  py::class_<CompensatorSpec>(m, "CompensatorSpec")
      .def(py::init([](double length_mm, double temperature_c) {
             return CompensatorSpec{length_mm, temperature_c};
           }),
           py::arg("length_mm"), py::arg("temperature_c") = 25.0)
      .def_readwrite("length_mm", &CompensatorSpec::length_mm)
      .def_readwrite("temperature_c", &CompensatorSpec::temperature_c);

  py::class_<WaveplateStack>(m, "WaveplateStack")
      .def_static("default_acqwp", &WaveplateStack::default_acqwp)
      .def_readwrite("tilt_deg", &WaveplateStack::tilt_deg);

  py::class_<SpectralFilter>(m, "SpectralFilter")
      .def(py::init([](double center_nm, double fwhm_nm, const std::string& shape,
                       double peak_transmission) {
             return SpectralFilter{center_nm, fwhm_nm, shape_from_string(shape),
                                   peak_transmission};
           }),
           py::arg("center_nm"), py::arg("fwhm_nm"), py::arg("shape") = "tophat",
           py::arg("peak_transmission") = 1.0)
      .def("transmission", &SpectralFilter::transmission);

  py::class_<DetectionConfig>(m, "DetectionConfig")
      .def(py::init<>())
      .def_readwrite("eta_s", &DetectionConfig::eta_s)
      .def_readwrite("eta_i", &DetectionConfig::eta_i)
      .def_readwrite("dark_s_cps", &DetectionConfig::dark_s_cps)
      .def_readwrite("dark_i_cps", &DetectionConfig::dark_i_cps)
      .def_readwrite("coincidence_window_s",
                     &DetectionConfig::coincidence_window_s)
      .def_readwrite("dead_time_s", &DetectionConfig::dead_time_s)
      .def_readwrite("analyzer_transmission",
                     &DetectionConfig::analyzer_transmission);

  py::class_<SourceBrightness>(m, "SourceBrightness")
      .def(py::init([](double pairs_per_mw, double spectral_fwhm_nm) {
             return SourceBrightness{pairs_per_mw, spectral_fwhm_nm};
           }),
           py::arg("pairs_per_mw"), py::arg("spectral_fwhm_nm") = 0.0)
      .def_readwrite("pairs_per_mw", &SourceBrightness::pairs_per_mw)
      .def_readwrite("spectral_fwhm_nm", &SourceBrightness::spectral_fwhm_nm);

  py::class_<RateReport>(m, "RateReport")
      .def_readonly("power_mw", &RateReport::power_mw)
      .def_readonly("singles_s_cps", &RateReport::singles_s_cps)
      .def_readonly("singles_i_cps", &RateReport::singles_i_cps)
      .def_readonly("true_coincidences_cps", &RateReport::true_coincidences_cps)
      .def_readonly("accidentals_cps", &RateReport::accidentals_cps)
      .def_readonly("detected_twofold_cps", &RateReport::detected_twofold_cps)
      .def_readonly("raw_fidelity", &RateReport::raw_fidelity);

  py::class_<FlatnessReport>(m, "FlatnessReport")
      .def_readonly("peak_to_peak_rad", &FlatnessReport::peak_to_peak_rad)
      .def_readonly("rms_rad", &FlatnessReport::rms_rad);

  py::class_<SourceConfig>(m, "SourceConfig")
      .def_readonly("pump_nm", &SourceConfig::pump_nm)
      .def_readonly("signal_nm", &SourceConfig::signal_nm)
      .def_readonly("idler_nm", &SourceConfig::idler_nm)
      .def_readonly("crystal", &SourceConfig::crystal)
      .def_readonly("compensator", &SourceConfig::compensator)
      .def_readonly("waveplate", &SourceConfig::waveplate)
      .def_readonly("filter", &SourceConfig::filter)
      .def_readonly("detection", &SourceConfig::detection)
      .def_readonly("brightness", &SourceConfig::brightness)
      .def_readonly("ktp_temperature_c", &SourceConfig::ktp_temperature_c)
      .def_readonly("balance", &SourceConfig::balance);

  m.def("load_source_config", &load_source_config, py::arg("path"));

  // dispersion
  m.def(
      "refractive_index",
      [](Material mat, Axis axis, double wavelength_nm, double temperature_c) {
        return MaterialLibrary::builtin().index(mat, axis, wavelength_nm,
                                                temperature_c);
      },
      py::arg("material"), py::arg("axis"), py::arg("wavelength_nm"),
      py::arg("temperature_c") = 25.0);
  m.def(
      "birefringence",
      [](Material mat, double wavelength_nm, double temperature_c) {
        return MaterialLibrary::builtin().birefringence(mat, wavelength_nm,
                                                        temperature_c);
      },
      py::arg("material"), py::arg("wavelength_nm"),
      py::arg("temperature_c") = 25.0);

  // phase matching
  m.def("idler_wavelength", &idler_wavelength, py::arg("pump_nm"),
        py::arg("signal_nm"));
  m.def(
      "qpm_mismatch",
      [](double pump_nm, double signal_nm, const CrystalSpec& crystal,
         double temperature_c) {
        return qpm_mismatch(MaterialLibrary::builtin(),
                            SpdcProcess::collinear(pump_nm, signal_nm, crystal,
                                                   temperature_c));
      },
      py::arg("pump_nm"), py::arg("signal_nm"), py::arg("crystal"),
      py::arg("temperature_c"));
  m.def(
      "phasematch_temperature",
      [](double pump_nm, double signal_nm, const CrystalSpec& crystal) {
        return phasematch_temperature(MaterialLibrary::builtin(), pump_nm,
                                      signal_nm, crystal);
      },
      py::arg("pump_nm"), py::arg("signal_nm"), py::arg("crystal"));
  m.def(
      "joint_spectrum",
      [](double pump_nm, double temperature_c, const CrystalSpec& crystal,
         const std::vector<double>& signal_grid_nm) {
        const auto js = joint_spectrum(MaterialLibrary::builtin(), pump_nm,
                                       temperature_c, crystal, signal_grid_nm);
        return py::make_tuple(js.signal_nm, js.intensity, js.fwhm_nm);
      },
      py::arg("pump_nm"), py::arg("temperature_c"), py::arg("crystal"),
      py::arg("signal_grid_nm"));

  // phase compensation
  m.def(
      "waveplate_retardation",
      [](const WaveplateStack& stack, double wavelength_nm) {
        return waveplate_retardation(MaterialLibrary::builtin(), stack,
                                     wavelength_nm);
      },
      py::arg("stack"), py::arg("wavelength_nm"));
  m.def(
      "uncompensated_phase",
      [](double signal_nm, double idler_nm, const CrystalSpec& crystal,
         const WaveplateStack& stack, double ktp_temperature_c) {
        return uncompensated_phase(MaterialLibrary::builtin(), signal_nm,
                                   idler_nm, crystal, stack,
                                   ktp_temperature_c);
      },
      py::arg("signal_nm"), py::arg("idler_nm"), py::arg("crystal"),
      py::arg("stack"), py::arg("ktp_temperature_c") = 25.0);
  m.def(
      "compensation_phase",
      [](double signal_nm, double idler_nm, const CompensatorSpec& comp) {
        return compensation_phase(MaterialLibrary::builtin(), signal_nm,
                                  idler_nm, comp);
      },
      py::arg("signal_nm"), py::arg("idler_nm"), py::arg("compensator"));
  m.def(
      "optimize_compensator_length",
      [](double pump_nm, const std::vector<double>& signal_window_nm,
         const CrystalSpec& crystal, const WaveplateStack& stack,
         double ktp_temperature_c, double compensator_temperature_c) {
        const auto design = optimize_compensator_length(
            MaterialLibrary::builtin(), pump_nm, signal_window_nm, crystal,
            stack, ktp_temperature_c, compensator_temperature_c,
            Weighting::Uniform);
        return py::make_tuple(design.length_mm, design.report);
      },
      py::arg("pump_nm"), py::arg("signal_window_nm"), py::arg("crystal"),
      py::arg("stack"), py::arg("ktp_temperature_c") = 25.0,
      py::arg("compensator_temperature_c") = 25.0);
  m.def(
      "diagonal_phase_map",
      [](double pump_nm, const std::vector<double>& signal_grid_nm,
         const CrystalSpec& crystal, const WaveplateStack& stack,
         const CompensatorSpec& comp, double ktp_temperature_c,
         bool subtract_offset) {
        const auto map =
            diagonal_phase_map(MaterialLibrary::builtin(), pump_nm,
                               signal_grid_nm, crystal, stack, comp,
                               ktp_temperature_c, subtract_offset);
        return py::make_tuple(map.signal_nm, map.idler_nm, map.phase_rad);
      },
      py::arg("pump_nm"), py::arg("signal_grid_nm"), py::arg("crystal"),
      py::arg("stack"), py::arg("compensator"), py::arg("ktp_temperature_c"),
      py::arg("subtract_offset") = true);
  m.def(
      "temperature_phase_shift",
      [](const CompensatorSpec& comp, double delta_t_k, double signal_nm,
         double idler_nm) {
        return temperature_phase_shift(MaterialLibrary::builtin(), comp,
                                       delta_t_k, signal_nm, idler_nm);
      },
      py::arg("compensator"), py::arg("delta_t_k"), py::arg("signal_nm"),
      py::arg("idler_nm"));
  m.def(
      "compensator_temperature_tolerance",
      [](const CompensatorSpec& comp, double fidelity_target, double signal_nm,
         double idler_nm) {
        return temperature_tolerance(MaterialLibrary::builtin(), comp,
                                     fidelity_target, signal_nm, idler_nm);
      },
      py::arg("compensator"), py::arg("fidelity_target"), py::arg("signal_nm"),
      py::arg("idler_nm"));
  m.def(
      "crystal_temperature_tolerance",
      [](const CrystalSpec& crystal, double ktp_temperature_c,
         double fidelity_target, double signal_nm, double idler_nm) {
        return temperature_tolerance(MaterialLibrary::builtin(), crystal,
                                     ktp_temperature_c, fidelity_target,
                                     signal_nm, idler_nm);
      },
      py::arg("crystal"), py::arg("ktp_temperature_c"),
      py::arg("fidelity_target"), py::arg("signal_nm"), py::arg("idler_nm"));
  m.def(
      "mirror_displacement_phase",
      [](double displacement_um, double pump_nm, double signal_nm,
         double idler_nm) {
        const auto& air =
            MaterialLibrary::builtin().get(Material::Air, Axis::Isotropic);
        return mirror_displacement_phase(air, displacement_um, pump_nm,
                                         signal_nm, idler_nm);
      },
      py::arg("displacement_um"), py::arg("pump_nm"), py::arg("signal_nm"),
      py::arg("idler_nm"));
  m.def("bell_fidelity_phase", &bell_fidelity_phase, py::arg("phase_rad"));

  // polarization state
  m.def("build_state", &build_state, py::arg("signal_grid_nm"),
        py::arg("phase_rad"), py::arg("spectrum"), py::arg("filter"),
        py::arg("balance") = 0.5);
  m.def("density_matrix_from_coherence", &density_matrix_from_coherence,
        py::arg("balance"), py::arg("coherence"));
  m.def("spectral_coherence", &spectral_coherence, py::arg("signal_grid_nm"),
        py::arg("phase_rad"), py::arg("spectrum"), py::arg("filter"));
  m.def(
      "coincidence_probability",
      [](const DensityMatrix& rho, double theta_a_deg, double theta_b_deg,
         std::optional<double> qwp_a_deg, std::optional<double> qwp_b_deg) {
        return coincidence_probability(rho, {theta_a_deg, qwp_a_deg},
                                       {theta_b_deg, qwp_b_deg});
      },
      py::arg("rho"), py::arg("theta_a_deg"), py::arg("theta_b_deg"),
      py::arg("qwp_a_deg") = std::nullopt, py::arg("qwp_b_deg") = std::nullopt);
  m.def(
      "correlation_scan",
      [](const DensityMatrix& rho, double theta_b_deg,
         const std::vector<double>& theta_a_deg) {
        return correlation_scan(rho, theta_b_deg, theta_a_deg);
      },
      py::arg("rho"), py::arg("theta_b_deg"), py::arg("theta_a_deg"));
  m.def(
      "fit_visibility",
      [](const std::vector<double>& theta_deg,
         const std::vector<double>& values) {
        const auto fit = fit_visibility(theta_deg, values);
        return py::make_tuple(fit.visibility, fit.theta0_deg, fit.amplitude,
                              fit.residual_rms);
      },
      py::arg("theta_deg"), py::arg("values"));
  m.def(
      "fidelity_witness",
      [](double v_hv, double v_da, double v_lr, const std::string& target) {
        return fidelity_witness({v_hv, v_da, v_lr, false},
                                bell_from_string(target));
      },
      py::arg("v_hv"), py::arg("v_da"), py::arg("v_lr"),
      py::arg("target") = "phi+");
  m.def(
      "fidelity_from_state",
      [](const DensityMatrix& rho, const std::string& target) {
        return fidelity_from_state(rho, bell_from_string(target));
      },
      py::arg("rho"), py::arg("target") = "phi+");

  // counting
  m.def("saturate", &saturate, py::arg("rate_cps"), py::arg("dead_time_s"));
  m.def("accidental_rate", &accidental_rate, py::arg("singles_s_cps"),
        py::arg("singles_i_cps"), py::arg("coincidence_window_s"));
  m.def("analytic_rates", &analytic_rates, py::arg("power_mw"),
        py::arg("source"), py::arg("detection"), py::arg("state_visibility"));
  m.def(
      "simulate_timetags",
      [](double power_mw, const SourceBrightness& source,
         const DetectionConfig& det, double duration_s, std::uint64_t seed) {
        const auto [s, i] =
            simulate_timetags(power_mw, source, det, duration_s, seed);
        return py::make_tuple(s.timestamps_s, i.timestamps_s);
      },
      py::arg("power_mw"), py::arg("source"), py::arg("detection"),
      py::arg("duration_s"), py::arg("seed"));
  m.def(
      "count_coincidences",
      [](const std::vector<double>& a, const std::vector<double>& b,
         double coincidence_window_s) {
        return count_coincidences({Channel::Signal, a, 0},
                                  {Channel::Idler, b, 0},
                                  coincidence_window_s);
      },
      py::arg("signal_tags_s"), py::arg("idler_tags_s"),
      py::arg("coincidence_window_s"));
  m.def(
      "calibrate_detection",
      [](double singles_s_cps, double singles_i_cps, double twofold_cps,
         double power_mw, const DetectionConfig& base) {
        const auto cal = calibrate_detection(singles_s_cps, singles_i_cps,
                                             twofold_cps, power_mw, base);
        return py::make_tuple(cal.brightness.pairs_per_mw, cal.eta_s,
                              cal.eta_i);
      },
      py::arg("singles_s_cps"), py::arg("singles_i_cps"),
      py::arg("twofold_cps"), py::arg("power_mw"), py::arg("base"));
}
