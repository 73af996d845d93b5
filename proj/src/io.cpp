#include "spdckit/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "spdckit/version.hpp"

namespace spdckit {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open output file '" + path + "'");
  out << std::setprecision(15);
  return out;
}

void write_csv_meta(std::ofstream& out, const OutputMeta& meta) {
  out << "# spdckit " << SPDCKIT_VERSION << "\n";
  if (!meta.config_hash.empty()) out << "# config_hash=" << meta.config_hash << "\n";
  if (!meta.command_line.empty()) out << "# command=" << meta.command_line << "\n";
}

json json_meta(const OutputMeta& meta) {
  return json{{"tool", "spdckit"},
              {"version", SPDCKIT_VERSION},
              {"config_hash", meta.config_hash},
              {"command", meta.command_line}};
}

void dump_json(const std::string& path, const json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << "\n";
}

const char* setting_label(Basis b, int index) {
  switch (b) {
    case Basis::HV: return index == 0 ? "H" : "V";
    case Basis::DA: return index == 0 ? "D" : "A";
    case Basis::LR: return index == 0 ? "L" : "R";
  }
  return "?";
}

int setting_index(Basis b, const std::string& label) {
  for (int i = 0; i < 2; ++i)
    if (label == setting_label(b, i)) return i;
  throw std::invalid_argument("counts file: setting '" + label +
                              "' does not belong to basis " + to_string(b));
}

}  // namespace

void write_phase_map_csv(const std::string& path, const PhaseMap& map,
                         const OutputMeta& meta) {
  auto out = open_out(path);
  write_csv_meta(out, meta);
  out << "# offset_subtracted=" << (map.offset_subtracted ? "true" : "false")
      << "\n";
  out << "signal_nm,idler_nm,phase_rad\n";
  if (map.diagonal) {
    for (std::size_t k = 0; k < map.phase_rad.size(); ++k)
      out << map.signal_nm[k] << "," << map.idler_nm[k] << ","
          << map.phase_rad[k] << "\n";
  } else {
    for (std::size_t si = 0; si < map.signal_nm.size(); ++si)
      for (std::size_t ii = 0; ii < map.idler_nm.size(); ++ii)
        out << map.signal_nm[si] << "," << map.idler_nm[ii] << ","
            << map.at(si, ii) << "\n";
  }
}

void write_phase_map_json(const std::string& path, const PhaseMap& map,
                          const OutputMeta& meta) {
  json doc{{"meta", json_meta(meta)},
           {"signal_nm", map.signal_nm},
           {"idler_nm", map.idler_nm},
           {"phase_rad", map.phase_rad},
           {"diagonal", map.diagonal},
           {"offset_subtracted", map.offset_subtracted}};
  dump_json(path, doc);
}

void write_rate_table_csv(const std::string& path,
                          const std::vector<SweepEntry>& rows,
                          const OutputMeta& meta) {
  auto out = open_out(path);
  write_csv_meta(out, meta);
  out << "power_mw,tau_cc_ns,singles_s,singles_i,twofold,accidentals,"
         "raw_fidelity\n";
  for (const auto& row : rows)
    out << row.rates.power_mw << "," << row.coincidence_window_s * 1e9 << ","
        << row.rates.singles_s_cps << "," << row.rates.singles_i_cps << ","
        << row.rates.detected_twofold_cps << "," << row.rates.accidentals_cps
        << "," << row.rates.raw_fidelity << "\n";
}

void write_rate_table_json(const std::string& path,
                           const std::vector<SweepEntry>& rows,
                           const OutputMeta& meta) {
  json arr = json::array();
  for (const auto& row : rows)
    arr.push_back({{"power_mw", row.rates.power_mw},
                   {"tau_cc_ns", row.coincidence_window_s * 1e9},
                   {"singles_s", row.rates.singles_s_cps},
                   {"singles_i", row.rates.singles_i_cps},
                   {"true_coincidences", row.rates.true_coincidences_cps},
                   {"twofold", row.rates.detected_twofold_cps},
                   {"accidentals", row.rates.accidentals_cps},
                   {"raw_fidelity", row.rates.raw_fidelity}});
  dump_json(path, json{{"meta", json_meta(meta)}, {"rates", arr}});
}

void write_counts_records_csv(const std::string& path,
                              const std::vector<CountsRecord>& records,
                              const OutputMeta& meta) {
  auto out = open_out(path);
  write_csv_meta(out, meta);
  out << "basis,setting_a,setting_b,counts,singles_s_cps,singles_i_cps,"
         "duration_s\n";
  for (const auto& r : records)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out << to_string(r.basis) << "," << setting_label(r.basis, i) << ","
            << setting_label(r.basis, j) << "," << r.counts[i][j] << ","
            << r.singles_s_cps << "," << r.singles_i_cps << ","
            << r.duration_s << "\n";
}

std::vector<CountsRecord> read_counts_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open counts file '" + path + "'");

  std::vector<CountsRecord> records;
  auto record_for = [&](Basis b, double ss, double si,
                        double dur) -> CountsRecord& {
    for (auto& r : records)
      if (r.basis == b) return r;
    records.push_back(CountsRecord{b, {}, ss, si, dur});
    return records.back();
  };

  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {  // header row
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string basis_s, a_s, b_s, counts_s, ss_s, si_s, dur_s;
    if (!std::getline(row, basis_s, ',') || !std::getline(row, a_s, ',') ||
        !std::getline(row, b_s, ',') || !std::getline(row, counts_s, ',') ||
        !std::getline(row, ss_s, ',') || !std::getline(row, si_s, ',') ||
        !std::getline(row, dur_s))
      throw std::invalid_argument("counts file: malformed row '" + line + "'");
    const Basis basis = basis_from_string(basis_s);
    CountsRecord& rec = record_for(basis, std::stod(ss_s), std::stod(si_s),
                                   std::stod(dur_s));
    rec.counts[setting_index(basis, a_s)][setting_index(basis, b_s)] =
        std::stod(counts_s);
  }
  if (records.empty())
    throw std::invalid_argument("counts file: no data rows in '" + path + "'");
  return records;
}

void write_density_matrix_json(const std::string& path,
                               const DensityMatrix& rho,
                               const OutputMeta& meta) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < 4; ++i) {
    json re_row = json::array(), im_row = json::array();
    for (int j = 0; j < 4; ++j) {
      re_row.push_back(rho(i, j).real());
      im_row.push_back(rho(i, j).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  dump_json(path, json{{"meta", json_meta(meta)},
                       {"basis", {"HH", "HV", "VH", "VV"}},
                       {"real", re},
                       {"imag", im}});
}

void write_timetags_csv(const std::string& path, const TimeTagStream& a,
                        const TimeTagStream& b, const OutputMeta& meta) {
  auto out = open_out(path);
  write_csv_meta(out, meta);
  out << "channel,t_seconds\n";
  out << std::setprecision(12) << std::fixed;
  for (double t : a.timestamps_s) out << "signal," << t << "\n";
  for (double t : b.timestamps_s) out << "idler," << t << "\n";
}

}  // namespace spdckit
