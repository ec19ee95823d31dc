#include "ttl/metrics/confusion.hpp"

#include "ttl/core/error.hpp"

namespace ttl {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t n = 0;
  for (const auto& row : counts)
    for (const auto v : row) n += v;
  return n;
}

std::int64_t ConfusionMatrix::correct() const {
  std::int64_t n = 0;
  for (int i = 0; i < num_classes; ++i) n += counts[i][i];
  return n;
}

double ConfusionMatrix::accuracy() const {
  const auto n = total();
  return n == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(n);
}

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted, int num_classes) {
  if (truth.size() != predicted.size()) throw Error(ErrorCode::DimensionMismatch, "truth/prediction length differ");
  ConfusionMatrix cm;
  cm.num_classes = num_classes;
  cm.counts.assign(num_classes, std::vector<std::int64_t>(num_classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes || predicted[i] < 0 || predicted[i] >= num_classes)
      throw Error(ErrorCode::LabelOutOfRange, "class index out of range in confusion matrix");
    ++cm.counts[truth[i]][predicted[i]];
  }
  cm.normalized.assign(num_classes, std::vector<double>(num_classes, 0.0));
  cm.empty_row.assign(num_classes, false);
  for (int r = 0; r < num_classes; ++r) {
    std::int64_t support = 0;
    for (const auto v : cm.counts[r]) support += v;
    if (support == 0) {
      cm.empty_row[r] = true;
      continue;
    }
    for (int c = 0; c < num_classes; ++c)
      cm.normalized[r][c] = static_cast<double>(cm.counts[r][c]) / static_cast<double>(support);
  }
  return cm;
}

}  // namespace ttl
