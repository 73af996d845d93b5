#include "spdckit/polstate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spdckit {

namespace {

using Cx = std::complex<double>;

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// |v> = Uqwp^dagger |theta>: the polarization state the analyzer chain
// transmits. QWP Jones convention: fast axis phase 0, slow axis +pi/2.
Eigen::Vector2cd analyzer_ket(const AnalyzerSetting& s) {
  const double th = deg_to_rad(s.polarizer_deg);
  Eigen::Vector2cd ket(std::cos(th), std::sin(th));
  if (s.qwp_deg) {
    const double q = deg_to_rad(*s.qwp_deg);
    Eigen::Matrix2cd rot;
    rot << std::cos(q), -std::sin(q), std::sin(q), std::cos(q);
    Eigen::Matrix2cd wave = Eigen::Matrix2cd::Zero();
    wave(0, 0) = Cx(1.0, 0.0);
    wave(1, 1) = Cx(0.0, 1.0);
    const Eigen::Matrix2cd u = rot * wave * rot.transpose();
    ket = u.adjoint() * ket;
  }
  return ket;
}

Eigen::Vector4cd bell_ket(BellState target) {
  // {HH, HV, VH, VV}; Phi+- = (|HH> +- |VV>)/sqrt(2)
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  v(0) = inv_sqrt2;
  v(3) = target == BellState::PhiPlus ? inv_sqrt2 : -inv_sqrt2;
  return v;
}

}  // namespace

void validate_density_matrix(const DensityMatrix& rho) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12)
    throw std::domain_error("density matrix not Hermitian (deviation " +
                            std::to_string(herm) + ")");
  const double tr = std::abs(rho.trace() - Cx(1.0, 0.0));
  if (tr > 1e-12)
    throw std::domain_error("density matrix trace differs from 1 by " +
                            std::to_string(tr));
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho,
                                                  Eigen::EigenvaluesOnly);
  const double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < -1e-10)
    throw std::domain_error("density matrix not positive semidefinite (" +
                            std::to_string(min_ev) + ")");
}

DensityMatrix density_matrix_from_coherence(double balance,
                                            std::complex<double> coherence) {
  if (!(balance >= 0.0 && balance <= 1.0))
    throw std::domain_error("balance must lie in [0, 1]");
  if (std::abs(coherence) > 1.0 + 1e-12)
    throw std::domain_error("|coherence| must not exceed 1");
  DensityMatrix rho = DensityMatrix::Zero();
  rho(0, 0) = balance;
  rho(3, 3) = 1.0 - balance;
  const double off = std::sqrt(balance * (1.0 - balance));
  rho(0, 3) = off * coherence;
  rho(3, 0) = off * std::conj(coherence);
  validate_density_matrix(rho);
  return rho;
}

double SpectralFilter::transmission(double wavelength_nm) const {
  if (!(fwhm_nm > 0.0)) throw std::domain_error("filter fwhm must be > 0");
  const double d = wavelength_nm - center_nm;
  if (shape == Shape::Tophat)
    return std::abs(d) <= 0.5 * fwhm_nm ? peak_transmission : 0.0;
  const double sigma = fwhm_nm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  return peak_transmission * std::exp(-0.5 * d * d / (sigma * sigma));
}

std::complex<double> spectral_coherence(
    const std::vector<double>& signal_grid_nm,
    const std::vector<double>& phase_rad, const std::vector<double>& spectrum,
    const SpectralFilter& filter) {
  if (signal_grid_nm.size() != phase_rad.size() ||
      signal_grid_nm.size() != spectrum.size() || signal_grid_nm.empty())
    throw std::invalid_argument(
        "spectral_coherence: grid, phase and spectrum must share one length");

  Cx num(0.0, 0.0);
  double den = 0.0;
  for (std::size_t k = 0; k < signal_grid_nm.size(); ++k) {
    const double w = spectrum[k] * filter.transmission(signal_grid_nm[k]);
    num += w * std::exp(Cx(0.0, phase_rad[k]));
    den += w;
  }
  if (den <= 0.0)
    throw std::domain_error(
        "spectral_coherence: filter removes the whole sampled spectrum");
  return num / den;
}

DensityMatrix build_state(const std::vector<double>& signal_grid_nm,
                          const std::vector<double>& phase_rad,
                          const std::vector<double>& spectrum,
                          const SpectralFilter& filter, double balance) {
  return density_matrix_from_coherence(
      balance, spectral_coherence(signal_grid_nm, phase_rad, spectrum, filter));
}

double coincidence_probability(const DensityMatrix& rho,
                               const AnalyzerSetting& a,
                               const AnalyzerSetting& b) {
  const Eigen::Vector2cd va = analyzer_ket(a);
  const Eigen::Vector2cd vb = analyzer_ket(b);
  Eigen::Vector4cd vab;
  vab << va(0) * vb(0), va(0) * vb(1), va(1) * vb(0), va(1) * vb(1);
  const Cx p = vab.adjoint() * rho * vab;
  return std::max(0.0, p.real());
}

std::vector<double> correlation_scan(const DensityMatrix& rho,
                                     double theta_b_deg,
                                     const std::vector<double>& theta_a_deg) {
  if (theta_a_deg.empty())
    throw std::invalid_argument("correlation_scan: empty angle grid");
  std::vector<double> curve;
  curve.reserve(theta_a_deg.size());
  const AnalyzerSetting b = AnalyzerSetting::linear(theta_b_deg);
  for (double th : theta_a_deg)
    curve.push_back(
        coincidence_probability(rho, AnalyzerSetting::linear(th), b));
  return curve;
}

VisibilityFit fit_visibility(const std::vector<double>& theta_deg,
                             const std::vector<double>& values) {
  if (theta_deg.size() != values.size())
    throw std::invalid_argument("fit_visibility: angle/value size mismatch");
  if (theta_deg.size() < 4)
    throw std::invalid_argument("fit_visibility: need at least 4 samples");

  // A (1 - V cos 2(t - t0)) = a0 + a1 cos 2t + a2 sin 2t, solved directly.
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d aty = Eigen::Vector3d::Zero();
  for (std::size_t k = 0; k < theta_deg.size(); ++k) {
    const double t2 = 2.0 * deg_to_rad(theta_deg[k]);
    const Eigen::Vector3d row(1.0, std::cos(t2), std::sin(t2));
    ata += row * row.transpose();
    aty += row * values[k];
  }
  if (std::abs(ata.determinant()) < 1e-9)
    throw std::runtime_error(
        "fit_visibility: angles do not span the fit basis (need >= half a "
        "period of distinct settings)");
  const Eigen::Vector3d coef = ata.ldlt().solve(aty);

  const double amp = coef(0);
  const double mod = std::hypot(coef(1), coef(2));
  if (mod <= 1e-12 * std::max(std::abs(amp), 1e-30))
    throw std::runtime_error("fit_visibility: constant data has no fringe");

  VisibilityFit fit;
  fit.amplitude = amp;
  fit.visibility = amp > 0.0 ? std::min(1.0, mod / amp) : 0.0;
  fit.theta0_deg =
      0.5 * std::atan2(-coef(2), -coef(1)) * 180.0 / std::numbers::pi;

  double ss = 0.0;
  for (std::size_t k = 0; k < theta_deg.size(); ++k) {
    const double t2 = 2.0 * deg_to_rad(theta_deg[k]);
    const double model = coef(0) + coef(1) * std::cos(t2) + coef(2) * std::sin(t2);
    ss += (values[k] - model) * (values[k] - model);
  }
  fit.residual_rms = std::sqrt(ss / theta_deg.size());
  return fit;
}

const char* to_string(Basis b) {
  switch (b) {
    case Basis::HV: return "HV";
    case Basis::DA: return "DA";
    case Basis::LR: return "LR";
  }
  return "?";
}

Basis basis_from_string(const std::string& s) {
  if (s == "HV") return Basis::HV;
  if (s == "DA") return Basis::DA;
  if (s == "LR") return Basis::LR;
  throw std::invalid_argument("unknown basis '" + s + "'");
}

double basis_visibility(const CountsRecord& r) {
  const double nii = r.counts[0][0], njj = r.counts[1][1];
  const double nij = r.counts[0][1], nji = r.counts[1][0];
  const double total = nii + njj + nij + nji;
  if (!(total > 0.0))
    throw std::domain_error("basis_visibility: zero total counts");
  return (nii + njj - nij - nji) / total;
}

CountsRecord accidental_correction(const CountsRecord& record,
                                   double coincidence_window_s) {
  if (coincidence_window_s < 0.0)
    throw std::invalid_argument(
        "accidental_correction: negative coincidence window");
  if (!(record.duration_s > 0.0) || record.singles_s_cps < 0.0 ||
      record.singles_i_cps < 0.0)
    throw std::invalid_argument(
        "accidental_correction: record needs singles rates and a duration");
  CountsRecord out = record;
  const double acc = record.singles_s_cps * record.singles_i_cps *
                     coincidence_window_s * record.duration_s;
  for (auto& row : out.counts)
    for (double& n : row) n = std::max(0.0, n - acc);
  return out;
}

double fidelity_witness(const VisibilitySet& v, BellState target) {
  const double s = target == BellState::PhiPlus ? 1.0 : -1.0;
  return (1.0 + v.v_hv + s * v.v_da - s * v.v_lr) / 4.0;
}

double fidelity_from_state(const DensityMatrix& rho, BellState target) {
  const Eigen::Vector4cd phi = bell_ket(target);
  const Cx f = phi.adjoint() * rho * phi;
  return f.real();
}

}  // namespace spdckit
