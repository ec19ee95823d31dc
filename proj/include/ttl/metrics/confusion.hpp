#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ttl {

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  int num_classes = 0;
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::vector<double>> normalized;  // row-stochastic; zero-support rows stay all-zero
  std::vector<bool> empty_row;

  std::int64_t total() const;
  std::int64_t correct() const;
  double accuracy() const;
};

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted, int num_classes);

}  // namespace ttl
