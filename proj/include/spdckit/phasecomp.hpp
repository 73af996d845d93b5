#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "spdckit/dispersion.hpp"
#include "spdckit/phasematch.hpp"

namespace spdckit {

struct WaveplateLayer {
  Material material = Material::Vacuum;
  double thickness_um = 0.0;
  int orientation = +1;  // fast-axis alignment relative to the stack axis
};

/// Birefringent plate stack. The default stack is a two-layer MgF2/quartz
/// achromat with crossed axes; its thicknesses are calibration data solved by
/// tools/fit_acqwp_stack.py from the retardations quoted in its header.
struct WaveplateStack {
  std::vector<WaveplateLayer> layers;
  double tilt_deg = 0.0;  // tilt about the optic axis

  static WaveplateStack default_acqwp();
};

struct CompensatorSpec {
  double length_mm = 0.0;  // 0 = no compensator
  double temperature_c = 25.0;
};

/// Single-pass retardation of the stack, rad:
/// sum of sign * 2 pi (n_e - n_o) t_eff / lambda per layer, where tilt scales
/// the path as t_eff = t / cos(theta_internal) (small-angle trim model, not
/// anisotropic ray tracing).
double waveplate_retardation(const MaterialLibrary& lib,
                             const WaveplateStack& stack,
                             double wavelength_nm);

/// Double-pass relative phase between the pair amplitudes before any
/// compensation: 2 pi L [n_y(li)/li + n_y(ls)/ls] + 2 [G(ls) + G(li)],
/// with the pump phase treated as a constant offset (set to zero).
double uncompensated_phase(const MaterialLibrary& lib, double signal_nm,
                           double idler_nm, const CrystalSpec& crystal,
                           const WaveplateStack& stack,
                           double ktp_temperature_c);

/// Birefringent compensation phase of the YVO4 crystal:
/// 2 pi L_yvo [ n_o(ls)/ls + n_o(li)/li - (n_e(ls)/ls + n_e(li)/li) ].
double compensation_phase(const MaterialLibrary& lib, double signal_nm,
                          double idler_nm, const CompensatorSpec& comp);

/// Relative-phase samples over signal/idler wavelengths. Diagonal maps hold
/// one phase per (signal_nm[k], idler_nm[k]) pair; full grids are row-major
/// with the signal index slowest.
struct PhaseMap {
  std::vector<double> signal_nm;
  std::vector<double> idler_nm;
  std::vector<double> phase_rad;
  bool diagonal = true;
  bool offset_subtracted = false;

  double at(std::size_t signal_index, std::size_t idler_index) const;
};

enum class Weighting { Uniform, Spectrum };

struct FlatnessReport {
  double peak_to_peak_rad = 0.0;
  double rms_rad = 0.0;  // about the (weighted) mean
  std::array<double, 2> signal_window_nm{0.0, 0.0};
  std::array<double, 2> idler_window_nm{0.0, 0.0};
  Weighting weighting = Weighting::Uniform;
};

/// Map over the energy-conserving diagonal: the idler grid is derived from
/// the signal grid through 1/li = 1/lp - 1/ls. When subtract_offset is set
/// the phase at the window center is removed.
PhaseMap diagonal_phase_map(const MaterialLibrary& lib, double pump_nm,
                            const std::vector<double>& signal_grid_nm,
                            const CrystalSpec& crystal,
                            const WaveplateStack& stack,
                            const CompensatorSpec& comp,
                            double ktp_temperature_c, bool subtract_offset);

/// Full 2-D map over independent signal/idler grids.
PhaseMap grid_phase_map(const MaterialLibrary& lib,
                        const std::vector<double>& signal_grid_nm,
                        const std::vector<double>& idler_grid_nm,
                        const CrystalSpec& crystal, const WaveplateStack& stack,
                        const CompensatorSpec& comp, double ktp_temperature_c,
                        bool subtract_offset);

/// Peak-to-peak and rms spread of a map. Spectrum weighting takes per-sample
/// weights (e.g. filtered joint-spectrum intensity) of the same length as the
/// phase array; uniform weighting ignores them.
FlatnessReport flatness(const PhaseMap& map, Weighting weighting,
                        const std::vector<double>* weights = nullptr);

struct CompensatorDesign {
  double length_mm = 0.0;
  FlatnessReport report;
};

/// Golden-section search on [0, 50] mm (1 um resolution) for the compensator
/// length minimizing the flatness objective of the total phase over the given
/// diagonal window. Both objectives are convex in the length, so the search
/// is exact. A single-point window minimizes the squared phase slope along
/// the energy-conserving line instead.
CompensatorDesign optimize_compensator_length(
    const MaterialLibrary& lib, double pump_nm,
    const std::vector<double>& signal_window_nm, const CrystalSpec& crystal,
    const WaveplateStack& stack, double ktp_temperature_c,
    double compensator_temperature_c, Weighting weighting,
    const std::vector<double>* weights = nullptr);

/// compensation_phase at T + dT minus at T.
double temperature_phase_shift(const MaterialLibrary& lib,
                               const CompensatorSpec& comp, double delta_t_k,
                               double signal_nm, double idler_nm);

/// Bell-state fidelity of |Psi(phi)> against the phi = 0 state: cos^2(phi/2).
double bell_fidelity_phase(double phase_rad);

/// Largest temperature excursion of the compensator keeping the fidelity at
/// or above the target: inverts cos^2(phi/2) and divides by the local
/// |d phi_C / dT|. Target must lie in (0.5, 1).
double temperature_tolerance(const MaterialLibrary& lib,
                             const CompensatorSpec& comp,
                             double fidelity_target, double signal_nm,
                             double idler_nm);

/// Same budget for the down-conversion crystal, modeled through the
/// double-pass z/y differential phase 2 pi (2L) [dn_zy(ls)/ls + dn_zy(li)/li].
double temperature_tolerance(const MaterialLibrary& lib,
                             const CrystalSpec& crystal,
                             double ktp_temperature_c, double fidelity_target,
                             double signal_nm, double idler_nm);

/// Round-trip phase from moving the retro mirror by d through a dispersive
/// medium: 2 pi (2d) [(n(lp)-1)/lp - (n(ls)-1)/ls - (n(li)-1)/li]. The
/// index-independent part cancels exactly by energy conservation and is
/// dropped analytically, so a vacuum model yields exactly zero. Geometric
/// (Gouy) contributions are not modeled.
double mirror_displacement_phase(const DispersionModel& air_model,
                                 double displacement_um, double pump_nm,
                                 double signal_nm, double idler_nm);

}  // namespace spdckit
