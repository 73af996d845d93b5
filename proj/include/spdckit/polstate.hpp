#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <vector>

namespace spdckit {

/// Two-qubit polarization density matrix in the basis {HH, HV, VH, VV}.
using DensityMatrix = Eigen::Matrix4cd;

/// Throws std::domain_error unless Hermitian (1e-12), unit trace (1e-12) and
/// positive semidefinite (min eigenvalue >= -1e-10).
void validate_density_matrix(const DensityMatrix& rho);

/// State with populations (balance, 1-balance) on (HH, VV) and coherence
/// rho_{HH,VV} = sqrt(b(1-b)) * coherence. |coherence| must not exceed 1.
DensityMatrix density_matrix_from_coherence(double balance,
                                            std::complex<double> coherence);

struct SpectralFilter {
  enum class Shape { Tophat, Gaussian };
  double center_nm = 0.0;
  double fwhm_nm = 0.0;
  Shape shape = Shape::Tophat;
  double peak_transmission = 1.0;

  double transmission(double wavelength_nm) const;
};

/// Spectrally averaged coherence D = sum S T e^{i phi} / sum S T over the
/// signal grid (the signal-side filter stands in for both arms in
/// coincidence).
std::complex<double> spectral_coherence(const std::vector<double>& signal_grid_nm,
                                        const std::vector<double>& phase_rad,
                                        const std::vector<double>& spectrum,
                                        const SpectralFilter& filter);

/// Construct the averaged two-photon state from a diagonal phase map and the
/// joint spectral intensity sampled on the same grid.
DensityMatrix build_state(const std::vector<double>& signal_grid_nm,
                          const std::vector<double>& phase_rad,
                          const std::vector<double>& spectrum,
                          const SpectralFilter& filter, double balance);

/// Quarter-wave plate (optional) followed by a linear polarizer at theta.
/// Circular-basis settings: qwp at 45 deg with the polarizer at 0 (L) or
/// 90 deg (R).
struct AnalyzerSetting {
  double polarizer_deg = 0.0;
  std::optional<double> qwp_deg;

  static AnalyzerSetting linear(double theta_deg) { return {theta_deg, {}}; }
  static AnalyzerSetting left() { return {0.0, 45.0}; }
  static AnalyzerSetting right() { return {90.0, 45.0}; }
};

/// Exact quantum projection p = Tr[rho (Pi_A x Pi_B)].
double coincidence_probability(const DensityMatrix& rho,
                               const AnalyzerSetting& a,
                               const AnalyzerSetting& b);

std::vector<double> correlation_scan(const DensityMatrix& rho,
                                     double theta_b_deg,
                                     const std::vector<double>& theta_a_deg);

struct VisibilityFit {
  double visibility = 0.0;  // in [0, 1]
  double theta0_deg = 0.0;
  double amplitude = 0.0;
  double residual_rms = 0.0;
};

/// Direct least-squares fit of A (1 - V cos 2(theta - theta0)) to a scan.
/// Needs at least 4 distinct angles spanning half a period; constant data is
/// a fit error.
VisibilityFit fit_visibility(const std::vector<double>& theta_deg,
                             const std::vector<double>& values);

enum class Basis { HV, DA, LR };

const char* to_string(Basis b);
Basis basis_from_string(const std::string& s);

/// Coincidence counts of one basis: counts[i][j] is N_ij with i the signal
/// setting and j the idler setting (0 = first basis element, 1 = second).
struct CountsRecord {
  Basis basis = Basis::HV;
  std::array<std::array<double, 2>, 2> counts{};
  double singles_s_cps = 0.0;
  double singles_i_cps = 0.0;
  double duration_s = 0.0;
};

/// (N_ii + N_jj - N_ij - N_ji) / (N_ii + N_jj + N_ij + N_ji).
double basis_visibility(const CountsRecord& record);

/// Subtracts singles_s * singles_i * window * duration from every entry,
/// floored at zero.
CountsRecord accidental_correction(const CountsRecord& record,
                                   double coincidence_window_s);

struct VisibilitySet {
  double v_hv = 0.0;
  double v_da = 0.0;
  double v_lr = 0.0;  // signed; anti-correlation is negative
  bool corrected = false;
};

enum class BellState { PhiPlus, PhiMinus };

/// F = (1 + V_HV + s V_DA - s V_LR) / 4 with s = +1 for Phi+, -1 for Phi-.
double fidelity_witness(const VisibilitySet& v, BellState target);

/// Direct expectation value <Phi|rho|Phi>.
double fidelity_from_state(const DensityMatrix& rho, BellState target);

}  // namespace spdckit
