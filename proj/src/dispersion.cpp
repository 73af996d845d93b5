#include "spdckit/dispersion.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace spdckit {

namespace {

using nlohmann::json;

const std::map<std::string, Material> kMaterialNames = {
    {"KTP", Material::Ktp},   {"YVO4", Material::Yvo4},
    {"MgF2", Material::MgF2}, {"SiO2", Material::SiO2},
    {"Air", Material::Air},   {"Vacuum", Material::Vacuum}};

const std::map<std::string, Axis> kAxisNames = {
    {"y", Axis::Y},
    {"z", Axis::Z},
    {"o", Axis::Ordinary},
    {"ordinary", Axis::Ordinary},
    {"e", Axis::Extraordinary},
    {"extraordinary", Axis::Extraordinary},
    {"isotropic", Axis::Isotropic}};

double inverse_lambda_cubic(const std::array<double, 4>& c, double lambda_um) {
  const double inv = 1.0 / lambda_um;
  return c[0] + inv * (c[1] + inv * (c[2] + inv * c[3]));
}

}  // namespace

const char* to_string(Material m) {
  switch (m) {
    case Material::Ktp: return "KTP";
    case Material::Yvo4: return "YVO4";
    case Material::MgF2: return "MgF2";
    case Material::SiO2: return "SiO2";
    case Material::Air: return "Air";
    case Material::Vacuum: return "Vacuum";
  }
  return "?";
}

const char* to_string(Axis a) {
  switch (a) {
    case Axis::Y: return "y";
    case Axis::Z: return "z";
    case Axis::Ordinary: return "ordinary";
    case Axis::Extraordinary: return "extraordinary";
    case Axis::Isotropic: return "isotropic";
  }
  return "?";
}

Material material_from_string(const std::string& s) {
  auto it = kMaterialNames.find(s);
  if (it == kMaterialNames.end())
    throw std::invalid_argument("unknown material '" + s + "'");
  return it->second;
}

Axis axis_from_string(const std::string& s) {
  auto it = kAxisNames.find(s);
  if (it == kAxisNames.end())
    throw std::invalid_argument("unknown axis '" + s + "'");
  return it->second;
}

bool axis_valid_for(Material m, Axis a) {
  switch (m) {
    case Material::Ktp: return a == Axis::Y || a == Axis::Z;
    case Material::Yvo4:
    case Material::MgF2:
    case Material::SiO2:
      return a == Axis::Ordinary || a == Axis::Extraordinary;
    case Material::Air:
    case Material::Vacuum:
      return a == Axis::Isotropic;
  }
  return false;
}

double DispersionModel::index(double wavelength_nm,
                              double temperature_c) const {
  if (form == Form::ConstantUnity) return 1.0;

  if (!(wavelength_nm >= range_nm[0] && wavelength_nm <= range_nm[1])) {
    std::ostringstream msg;
    msg << to_string(material) << "(" << to_string(axis) << ") model valid "
        << range_nm[0] << "-" << range_nm[1] << " nm, got " << wavelength_nm
        << " nm";
    throw std::out_of_range(msg.str());
  }

  const double lambda_um = wavelength_nm * 1e-3;
  const double l2 = lambda_um * lambda_um;

  double n;
  if (form == Form::AirRefractivity) {
    const double s2 = 1.0 / l2;
    n = 1.0 + 1e-8 * (air_coefficients[0] / (air_coefficients[1] - s2) +
                      air_coefficients[2] / (air_coefficients[3] - s2));
  } else {
    double n2 = constant_term + lambda_sq_term * l2;
    for (const auto& p : poles)
      n2 += (p.num_const + p.num_lambda_sq * l2) / (l2 - p.resonance_um2);
    n = std::sqrt(n2);
  }

  if (has_thermo) {
    const double dt = temperature_c - reference_temperature_c;
    n += inverse_lambda_cubic(dndt_linear, lambda_um) * dt +
         inverse_lambda_cubic(dndt_quadratic, lambda_um) * dt * dt;
  }
  return n;
}

double refractive_index(const DispersionModel& model, double wavelength_nm,
                        double temperature_c) {
  return model.index(wavelength_nm, temperature_c);
}

double birefringence(const DispersionModel& a, const DispersionModel& b,
                     double wavelength_nm, double temperature_c) {
  if (a.material != b.material)
    throw std::invalid_argument(
        std::string("birefringence needs two axes of one material, got ") +
        to_string(a.material) + " and " + to_string(b.material));
  return a.index(wavelength_nm, temperature_c) -
         b.index(wavelength_nm, temperature_c);
}

// ---------------------------------------------------------------------------
// Built-in coefficient data. Same schema as user-loadable files; every set
// carries its literature source. The KTP z set is used down to 400 nm and the
// thermo-optic fits below their quoted lower bounds, as noted per entry.
// ---------------------------------------------------------------------------

namespace {

const char* kBuiltinMaterials = R"JSON({
  "models": [
    {
      "material": "KTP", "axis": "y", "form": "sellmeier_rational",
      "coefficients": {
        "constant": 3.45018,
        "poles": [
          {"num_const": 0.04341, "num_lambda_sq": 0.0, "resonance_um2": 0.04597},
          {"num_const": 16.98825, "num_lambda_sq": 0.0, "resonance_um2": 39.43799}
        ],
        "lambda_sq": 0.0
      },
      "thermo_optic": [6.2897e-6, 6.3061e-6, -6.0629e-6, 2.6486e-6,
                       -0.14445e-8, 2.2244e-8, -3.5770e-8, 2.3060e-8],
      "range_nm": [430, 1585],
      "reference_temperature_c": 25.0,
      "provenance": "Sellmeier: Kato & Takaoka, Appl. Opt. 41, 5040 (2002), 0.43-3.54 um; thermo-optic: Emanueli & Arie, Appl. Opt. 42, 6661 (2003), 0.532-1.585 um"
    },
    {
      "material": "KTP", "axis": "z", "form": "sellmeier_rational",
      "coefficients": {
        "constant": 2.12725,
        "poles": [
          {"num_const": 0.0, "num_lambda_sq": 1.18431, "resonance_um2": 5.14852e-2},
          {"num_const": 0.0, "num_lambda_sq": 0.6603, "resonance_um2": 100.00507}
        ],
        "lambda_sq": -9.68956e-3
      },
      "thermo_optic": [9.9587e-6, 9.9228e-6, -8.9603e-6, 4.1010e-6,
                       -1.1882e-8, 10.459e-8, -9.8136e-8, 3.1481e-8],
      "range_nm": [400, 1585],
      "reference_temperature_c": 25.0,
      "provenance": "Sellmeier: Fradkin et al., Appl. Phys. Lett. 74, 914 (1999), quoted 0.43-3.54 um, extended smoothly to 400 nm for near-UV pumps; thermo-optic: Emanueli & Arie, Appl. Opt. 42, 6661 (2003), quoted 0.532-1.585 um, extrapolated below"
    },
    {
      "material": "YVO4", "axis": "o", "form": "sellmeier_rational",
      "coefficients": {
        "constant": 3.77834,
        "poles": [{"num_const": 0.069736, "num_lambda_sq": 0.0, "resonance_um2": 0.04724}],
        "lambda_sq": -0.0108133
      },
      "thermo_optic": [8.5e-6],
      "range_nm": [400, 5000],
      "reference_temperature_c": 25.0,
      "provenance": "Sellmeier: standard room-temperature fit as tabulated by crystal vendors (CASTECH/Foctek datasheets); dn/dT: effective constant near 25 C in the 0.78-0.85 um band, representative of temperature-dependent Sellmeier measurements of rare-earth vanadates (Zelmon et al., Appl. Opt. 49, 644 (2010))"
    },
    {
      "material": "YVO4", "axis": "e", "form": "sellmeier_rational",
      "coefficients": {
        "constant": 4.59905,
        "poles": [{"num_const": 0.110534, "num_lambda_sq": 0.0, "resonance_um2": 0.04813}],
        "lambda_sq": -0.0122676
      },
      "thermo_optic": [3.9e-6],
      "range_nm": [400, 5000],
      "reference_temperature_c": 25.0,
      "provenance": "Sellmeier: standard room-temperature fit as tabulated by crystal vendors (CASTECH/Foctek datasheets); dn/dT: effective constant near 25 C in the 0.78-0.85 um band, representative of temperature-dependent Sellmeier measurements of rare-earth vanadates (Zelmon et al., Appl. Opt. 49, 644 (2010))"
    },
    {
      "material": "MgF2", "axis": "o", "form": "sellmeier_rational",
      "coefficients": {
        "constant": 1.0,
        "poles": [
          {"num_const": 0.0, "num_lambda_sq": 0.48755108, "resonance_um2": 1.882178397446400e-3},
          {"num_const": 0.0, "num_lambda_sq": 0.39875031, "resonance_um2": 8.951888471936401e-3},
          {"num_const": 0.0, "num_lambda_sq": 2.3120353, "resonance_um2": 566.1355913088159}
        ],
        "lambda_sq": 0.0
      },
      "thermo_optic": [],
      "range_nm": [200, 7040],
      "reference_temperature_c": 19.0,
      "provenance": "Dodge, Appl. Opt. 23, 1980 (1984), 0.20-7.04 um; treated as temperature-independent"
    },
    {
      "material": "MgF2", "axis": "e", "form": "sellmeier_rational",
      "coefficients": {
        "constant": 1.0,
        "poles": [
          {"num_const": 0.0, "num_lambda_sq": 0.41344023, "resonance_um2": 1.357378648464400e-3},
          {"num_const": 0.0, "num_lambda_sq": 0.50497499, "resonance_um2": 8.237671665024400e-3},
          {"num_const": 0.0, "num_lambda_sq": 2.4904862, "resonance_um2": 565.1077462800250}
        ],
        "lambda_sq": 0.0
      },
      "thermo_optic": [],
      "range_nm": [200, 7040],
      "reference_temperature_c": 19.0,
      "provenance": "Dodge, Appl. Opt. 23, 1980 (1984), 0.20-7.04 um; treated as temperature-independent"
    },
    {
      "material": "SiO2", "axis": "o", "form": "sellmeier_rational",
      "coefficients": {
        "constant": 1.28604141,
        "poles": [
          {"num_const": 0.0, "num_lambda_sq": 1.07044083, "resonance_um2": 1.00585997e-2},
          {"num_const": 0.0, "num_lambda_sq": 1.10202242, "resonance_um2": 100.0}
        ],
        "lambda_sq": 0.0
      },
      "thermo_optic": [],
      "range_nm": [198, 2050],
      "reference_temperature_c": 20.0,
      "provenance": "crystalline quartz, Ghosh, Opt. Commun. 163, 95 (1999), 0.198-2.05 um; treated as temperature-independent"
    },
    {
      "material": "SiO2", "axis": "e", "form": "sellmeier_rational",
      "coefficients": {
        "constant": 1.28851804,
        "poles": [
          {"num_const": 0.0, "num_lambda_sq": 1.09509924, "resonance_um2": 1.02101864e-2},
          {"num_const": 0.0, "num_lambda_sq": 1.15662475, "resonance_um2": 100.0}
        ],
        "lambda_sq": 0.0
      },
      "thermo_optic": [],
      "range_nm": [198, 2050],
      "reference_temperature_c": 20.0,
      "provenance": "crystalline quartz, Ghosh, Opt. Commun. 163, 95 (1999), 0.198-2.05 um; treated as temperature-independent"
    },
    {
      "material": "Air", "axis": "isotropic", "form": "air_refractivity",
      "coefficients": {"air": [5791817.0, 238.0185, 167909.0, 57.362]},
      "thermo_optic": [],
      "range_nm": [230, 1690],
      "reference_temperature_c": 15.0,
      "provenance": "dry air at 15 C, 101.325 kPa: Peck & Reeder, J. Opt. Soc. Am. 62, 958 (1972)"
    },
    {
      "material": "Vacuum", "axis": "isotropic", "form": "constant_unity",
      "coefficients": {},
      "thermo_optic": [],
      "range_nm": [0, 1e12],
      "reference_temperature_c": 25.0,
      "provenance": "identity"
    }
  ]
})JSON";

DispersionModel model_from_json(const json& j) {
  DispersionModel m;
  m.material = material_from_string(j.at("material").get<std::string>());
  m.axis = axis_from_string(j.at("axis").get<std::string>());
  if (!axis_valid_for(m.material, m.axis))
    throw std::invalid_argument(std::string("axis '") + to_string(m.axis) +
                                "' not valid for material '" +
                                to_string(m.material) + "'");

  const std::string form = j.at("form").get<std::string>();
  const json& c = j.at("coefficients");
  if (form == "sellmeier_rational") {
    m.form = DispersionModel::Form::SellmeierRational;
    m.constant_term = c.at("constant").get<double>();
    m.lambda_sq_term = c.value("lambda_sq", 0.0);
    for (const auto& p : c.at("poles"))
      m.poles.push_back({p.at("num_const").get<double>(),
                         p.at("num_lambda_sq").get<double>(),
                         p.at("resonance_um2").get<double>()});
  } else if (form == "air_refractivity") {
    m.form = DispersionModel::Form::AirRefractivity;
    const auto a = c.at("air").get<std::vector<double>>();
    if (a.size() != 4)
      throw std::invalid_argument("air_refractivity needs 4 coefficients");
    std::copy(a.begin(), a.end(), m.air_coefficients.begin());
  } else if (form == "constant_unity") {
    m.form = DispersionModel::Form::ConstantUnity;
  } else {
    throw std::invalid_argument("unknown dispersion form '" + form + "'");
  }

  const auto thermo = j.at("thermo_optic").get<std::vector<double>>();
  if (thermo.size() == 1) {
    m.has_thermo = true;
    m.dndt_linear = {thermo[0], 0.0, 0.0, 0.0};
  } else if (thermo.size() == 4) {
    m.has_thermo = true;
    std::copy(thermo.begin(), thermo.end(), m.dndt_linear.begin());
  } else if (thermo.size() == 8) {
    m.has_thermo = true;
    std::copy(thermo.begin(), thermo.begin() + 4, m.dndt_linear.begin());
    std::copy(thermo.begin() + 4, thermo.end(), m.dndt_quadratic.begin());
  } else if (!thermo.empty()) {
    throw std::invalid_argument(
        "thermo_optic must hold 0, 1, 4 or 8 coefficients");
  }

  const auto range = j.at("range_nm").get<std::vector<double>>();
  if (range.size() != 2 || !(range[0] < range[1]))
    throw std::invalid_argument("range_nm must be [lo, hi] with lo < hi");
  m.range_nm = {range[0], range[1]};
  m.reference_temperature_c = j.value("reference_temperature_c", 25.0);
  m.provenance = j.at("provenance").get<std::string>();
  return m;
}

}  // namespace

MaterialLibrary MaterialLibrary::from_json_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("material data: ") + e.what());
  }
  MaterialLibrary lib;
  for (const auto& entry : doc.at("models"))
    lib.models_.push_back(model_from_json(entry));
  if (lib.models_.empty())
    throw std::invalid_argument("material data holds no models");
  return lib;
}

MaterialLibrary MaterialLibrary::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open material file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

const MaterialLibrary& MaterialLibrary::builtin() {
  static const MaterialLibrary lib = from_json_string(kBuiltinMaterials);
  return lib;
}

const DispersionModel& MaterialLibrary::get(Material m, Axis a) const {
  for (const auto& model : models_)
    if (model.material == m && model.axis == a) return model;
  throw std::invalid_argument(std::string("no dispersion model for ") +
                              to_string(m) + "(" + to_string(a) + ")");
}

double MaterialLibrary::index(Material m, Axis a, double wavelength_nm,
                              double temperature_c) const {
  return get(m, a).index(wavelength_nm, temperature_c);
}

double MaterialLibrary::birefringence(Material m, double wavelength_nm,
                                      double temperature_c) const {
  switch (m) {
    case Material::Ktp:
      return spdckit::birefringence(get(m, Axis::Z), get(m, Axis::Y),
                                    wavelength_nm, temperature_c);
    case Material::Yvo4:
    case Material::MgF2:
    case Material::SiO2:
      return spdckit::birefringence(get(m, Axis::Ordinary),
                                    get(m, Axis::Extraordinary), wavelength_nm,
                                    temperature_c);
    case Material::Air:
    case Material::Vacuum:
      return 0.0;
  }
  return 0.0;
}

}  // namespace spdckit
