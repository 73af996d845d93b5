#pragma once

#include <array>
#include <string>
#include <vector>

namespace spdckit {

enum class Material { Ktp, Yvo4, MgF2, SiO2, Air, Vacuum };
enum class Axis { Y, Z, Ordinary, Extraordinary, Isotropic };

const char* to_string(Material m);
const char* to_string(Axis a);
Material material_from_string(const std::string& s);
Axis axis_from_string(const std::string& s);

/// KTP is biaxial (y/z axes used here), YVO4/MgF2/SiO2 are uniaxial (o/e),
/// air and vacuum are isotropic.
bool axis_valid_for(Material m, Axis a);

// One (a + b*l2)/(l2 - c) term of a Sellmeier expansion, l2 = lambda^2 in um^2.
struct SellmeierPole {
  double num_const = 0.0;
  double num_lambda_sq = 0.0;
  double resonance_um2 = 0.0;
};

/// Refractive-index model for one material/axis: a generalized Sellmeier fit
/// n^2(lambda) = constant_term + sum_i poles_i + lambda_sq_term * lambda^2
/// plus an additive thermo-optic correction
///   dn(lambda, T) = n1(lambda) * (T - Tref) + n2(lambda) * (T - Tref)^2
/// where n1, n2 are cubic polynomials in 1/lambda (lambda in um).
///
/// The air model uses the refractivity form
///   (n - 1) * 1e8 = c0 / (c1 - s^2) + c2 / (c3 - s^2),  s = 1/lambda [1/um],
/// and the vacuum model returns exactly 1 for any input.
struct DispersionModel {
  enum class Form { SellmeierRational, AirRefractivity, ConstantUnity };

  Material material = Material::Vacuum;
  Axis axis = Axis::Isotropic;
  Form form = Form::ConstantUnity;

  double constant_term = 0.0;
  std::vector<SellmeierPole> poles;
  double lambda_sq_term = 0.0;
  std::array<double, 4> air_coefficients{};

  bool has_thermo = false;
  std::array<double, 4> dndt_linear{};     // K^-1, inverse-lambda cubic
  std::array<double, 4> dndt_quadratic{};  // K^-2

  std::array<double, 2> range_nm{0.0, 0.0};
  double reference_temperature_c = 25.0;
  std::string provenance;

  double index(double wavelength_nm, double temperature_c) const;
};

/// n(lambda, T). Throws std::out_of_range when the wavelength lies outside
/// the model's validity range; the message names the model and its bounds.
double refractive_index(const DispersionModel& model, double wavelength_nm,
                        double temperature_c);

/// Index difference n_a - n_b between two axes of the same material.
/// Throws std::invalid_argument when the models belong to different materials.
double birefringence(const DispersionModel& a, const DispersionModel& b,
                     double wavelength_nm, double temperature_c);

/// Collection of dispersion models, one per material/axis.
///
/// Loadable from a JSON document of the form
///   { "models": [ { "material": "KTP", "axis": "z", "form": "...",
///                   "coefficients": {...}, "thermo_optic": [...],
///                   "range_nm": [lo, hi], "reference_temperature_c": 25,
///                   "provenance": "..." }, ... ] }
/// The built-in defaults are embedded in exactly this format.
class MaterialLibrary {
 public:
  static const MaterialLibrary& builtin();
  static MaterialLibrary from_json_string(const std::string& text);
  static MaterialLibrary from_json_file(const std::string& path);

  const DispersionModel& get(Material m, Axis a) const;
  double index(Material m, Axis a, double wavelength_nm,
               double temperature_c) const;

  /// Signed per-material convention: n_z - n_y for KTP, n_o - n_e for the
  /// uniaxials (so the value drops straight into the compensation-phase
  /// bracket), 0 for isotropic media.
  double birefringence(Material m, double wavelength_nm,
                       double temperature_c) const;

  const std::vector<DispersionModel>& models() const { return models_; }

 private:
  std::vector<DispersionModel> models_;
};

}  // namespace spdckit
