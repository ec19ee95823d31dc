#include "ttl/metrics/reports.hpp"

#include "ttl/core/error.hpp"
#include "ttl/core/report.hpp"
#include "ttl/datasets/image_io.hpp"

namespace ttl {

void write_confusion_csv(const std::filesystem::path& path, const ConfusionMatrix& cm) {
  std::vector<std::string> header{"true\\pred"};
  for (int c = 0; c < cm.num_classes; ++c) header.push_back(std::to_string(c));
  std::vector<std::vector<std::string>> rows;
  for (int r = 0; r < cm.num_classes; ++r) {
    std::vector<std::string> row{std::to_string(r)};
    for (int c = 0; c < cm.num_classes; ++c) row.push_back(format_real(cm.normalized[r][c], 6));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void write_confusion_png(const std::filesystem::path& path, const ConfusionMatrix& cm, int cell) {
  const int k = cm.num_classes;
  auto img = torch::ones({3, k * cell, k * cell});
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) {
      const double v = cm.normalized[r][c];  // 0 -> white, 1 -> dark blue
      const float red = static_cast<float>(1.0 - 2.0 * v * 0.9);
      const float green = static_cast<float>(1.0 - 2.0 * v * 0.75);
      const float blue = static_cast<float>(1.0 - 2.0 * v * 0.3);
      auto tile = img.narrow(1, r * cell, cell).narrow(2, c * cell, cell);
      tile[0].fill_(red);
      tile[1].fill_(green);
      tile[2].fill_(blue);
    }
  write_png(path, img);
}

void write_distance_csv(const std::filesystem::path& path, const DistanceAccuracyTable& table) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : table.rows)
    rows.push_back({format_real(r.distance_m, 10), format_real(100.0 * r.accuracy, 6), std::to_string(r.samples)});
  write_csv(path, {"distance_m", "accuracy_pct", "samples"}, rows);
}

torch::Tensor image_grid(const std::vector<std::vector<torch::Tensor>>& rows) {
  if (rows.empty() || rows.front().empty()) throw Error(ErrorCode::DataEmpty, "empty image grid");
  const auto& first = rows.front().front();
  const auto c = first.size(0), h = first.size(1), w = first.size(2);
  constexpr int kGap = 2;
  std::size_t cols = 0;
  for (const auto& r : rows) cols = std::max(cols, r.size());
  auto grid = torch::ones({c, static_cast<std::int64_t>(rows.size()) * (h + kGap) + kGap,
                           static_cast<std::int64_t>(cols) * (w + kGap) + kGap});
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      grid.narrow(1, kGap + static_cast<std::int64_t>(i) * (h + kGap), h)
          .narrow(2, kGap + static_cast<std::int64_t>(j) * (w + kGap), w)
          .copy_(rows[i][j].detach().to(torch::kFloat32));
  return grid;
}

}  // namespace ttl
