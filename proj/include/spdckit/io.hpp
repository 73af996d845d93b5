#pragma once

#include <string>
#include <vector>

#include "spdckit/counting.hpp"
#include "spdckit/phasecomp.hpp"
#include "spdckit/polstate.hpp"

namespace spdckit {

/// Reproducibility header carried by every output file: CSV as leading
/// '#' comment lines, JSON as a "meta" object.
struct OutputMeta {
  std::string config_hash;
  std::string command_line;
};

void write_phase_map_csv(const std::string& path, const PhaseMap& map,
                         const OutputMeta& meta);
void write_phase_map_json(const std::string& path, const PhaseMap& map,
                          const OutputMeta& meta);

void write_rate_table_csv(const std::string& path,
                          const std::vector<SweepEntry>& rows,
                          const OutputMeta& meta);
void write_rate_table_json(const std::string& path,
                           const std::vector<SweepEntry>& rows,
                           const OutputMeta& meta);

void write_counts_records_csv(const std::string& path,
                              const std::vector<CountsRecord>& records,
                              const OutputMeta& meta);
std::vector<CountsRecord> read_counts_records_csv(const std::string& path);

void write_density_matrix_json(const std::string& path,
                               const DensityMatrix& rho,
                               const OutputMeta& meta);

void write_timetags_csv(const std::string& path, const TimeTagStream& a,
                        const TimeTagStream& b, const OutputMeta& meta);

}  // namespace spdckit
