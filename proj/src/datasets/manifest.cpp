#include "ttl/datasets/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ttl/core/error.hpp"
#include "ttl/core/report.hpp"
#include "ttl/datasets/image_io.hpp"

namespace ttl {

std::vector<ChipRecord> read_manifest(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open manifest " + csv.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::IoFailure, "empty manifest " + csv.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "path,label,domain,distance_m")
    throw Error(ErrorCode::InvalidValue, "manifest header must be path,label,domain,distance_m");

  std::vector<ChipRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string path, label, domain, distance;
    if (!std::getline(row, path, ',') || !std::getline(row, label, ',') || !std::getline(row, domain, ',') ||
        !std::getline(row, distance))
      throw Error(ErrorCode::InvalidValue, csv.string() + ":" + std::to_string(lineno) + ": expected 4 columns");
    ChipRecord r;
    r.path = path;
    try {
      r.label = std::stoi(label);
      r.distance_m = std::stod(distance);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidValue, csv.string() + ":" + std::to_string(lineno) + ": bad number");
    }
    r.domain = domain_from_string(domain);
    if (!(r.distance_m > 0.0))
      throw Error(ErrorCode::NonpositiveDistance, csv.string() + ":" + std::to_string(lineno));
    out.push_back(std::move(r));
  }
  return out;
}

void write_manifest(const std::filesystem::path& csv, const std::vector<ChipRecord>& records) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(records.size());
  for (const auto& r : records)
    rows.push_back({r.path, std::to_string(r.label), std::string(to_string(r.domain)), format_real(r.distance_m, 10)});
  write_csv(csv, {"path", "label", "domain", "distance_m"}, rows);
}

ChipSet load_chips(const std::filesystem::path& manifest_csv, int channels) {
  const auto records = read_manifest(manifest_csv);
  const auto root = manifest_csv.parent_path();
  ChipSet chips;
  chips.reserve(records.size());
  for (const auto& r : records) {
    ImageChip c;
    c.pixels = read_png(root / r.path, channels);
    c.domain = r.domain;
    c.label = r.label;
    c.capture_distance_m = r.distance_m;
    chips.push_back(std::move(c));
  }
  return chips;
}

std::vector<ChipRecord> write_dataset(const std::filesystem::path& dir, const ChipSet& chips) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<ChipRecord> records;
  records.reserve(chips.size());
  std::size_t counter[2] = {0, 0};
  for (const auto& c : chips) {
    const auto d = static_cast<int>(c.domain);
    char name[64];
    std::snprintf(name, sizeof name, "%s/%06zu.png", std::string(to_string(c.domain)).c_str(), counter[d]++);
    std::filesystem::create_directories(dir / to_string(c.domain), ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + (dir / to_string(c.domain)).string());
    write_png(dir / name, c.pixels);
    records.push_back({name, c.label.value_or(0), c.domain, c.capture_distance_m.value_or(0.0)});
  }
  write_manifest(dir / "manifest.csv", records);
  return records;
}

bool is_standard_distance(double distance_m) {
  if (distance_m < 1000.0 || distance_m > 5000.0) return false;
  const double steps = (distance_m - 1000.0) / 500.0;
  return steps == std::floor(steps);
}

}  // namespace ttl
