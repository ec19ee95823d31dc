#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ttl {

/// Append-only JSON-lines stream, one object per line.
class JsonLinesWriter {
 public:
  JsonLinesWriter() = default;
  explicit JsonLinesWriter(const std::filesystem::path& path);

  bool is_open() const { return out_.is_open(); }
  void write(const nlohmann::json& record);

 private:
  std::ofstream out_;
};

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string format_real(double v, int precision = 6);
/// Shortest text that parses back to exactly `v`.
std::string format_exact(double v);

void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace ttl
