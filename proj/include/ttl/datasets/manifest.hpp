#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ttl/core/types.hpp"

namespace ttl {

/// One row of the ingestion manifest (path,label,domain,distance_m).
/// Paths are relative to the manifest's directory.
struct ChipRecord {
  std::string path;
  int label = 0;
  Domain domain = Domain::Source;
  double distance_m = 0.0;

  bool operator==(const ChipRecord&) const = default;
};

std::vector<ChipRecord> read_manifest(const std::filesystem::path& csv);
void write_manifest(const std::filesystem::path& csv, const std::vector<ChipRecord>& records);

/// Loads every record's PNG relative to the manifest directory.
ChipSet load_chips(const std::filesystem::path& manifest_csv, int channels = 3);

/// Writes chips as PNG files under `dir` plus `dir/manifest.csv`.
std::vector<ChipRecord> write_dataset(const std::filesystem::path& dir, const ChipSet& chips);

/// DSIAC-style distances are 1000..5000 m in 500 m steps.
bool is_standard_distance(double distance_m);

}  // namespace ttl
