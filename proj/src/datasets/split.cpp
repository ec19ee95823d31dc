#include "ttl/datasets/split.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "ttl/core/rng.hpp"

namespace ttl {
namespace {

// Largest-remainder apportionment of n records over train/val/test; ties go
// to the earlier part, so each count is the floor or ceiling of its share.
std::array<std::size_t, 3> apportion(std::size_t n) {
  constexpr std::array<double, 3> kShare{0.70, 0.15, 0.15};
  std::array<std::size_t, 3> out{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    const double exact = kShare[k] * static_cast<double>(n);
    out[k] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    rem[k] = exact - static_cast<double>(out[k]);
    assigned += out[k];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rem[a] > rem[b] + 1e-9; });
  for (int k = 0; assigned < n; ++k, ++assigned) ++out[order[k]];
  return out;
}

}  // namespace

SplitIndices split_indices(std::span<const int> labels, int num_classes, std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes)
      throw Error(ErrorCode::InvalidValue, "record label " + std::to_string(labels[i]) + " out of range");
    by_class[labels[i]].push_back(i);
  }
  for (int c = 0; c < num_classes; ++c)
    if (by_class[c].empty()) throw Error(ErrorCode::EmptyClass, "class " + std::to_string(c) + " has no records");

  const RngStreams streams(seed);
  for (int c = 0; c < num_classes; ++c) {
    auto eng = streams.engine("split", static_cast<std::uint64_t>(c));
    std::shuffle(by_class[c].begin(), by_class[c].end(), eng);
  }

  SplitIndices out;
  for (int c = 0; c < num_classes; ++c) {
    const auto& idx = by_class[c];
    const auto counts = idx.size() < 3 ? std::array<std::size_t, 3>{idx.size(), 0, 0} : apportion(idx.size());
    std::size_t k = 0;
    for (; k < counts[1]; ++k) out.val.push_back(idx[k]);
    for (std::size_t j = 0; j < counts[2]; ++j, ++k) out.test.push_back(idx[k]);
    for (; k < idx.size(); ++k) out.train.push_back(idx[k]);
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace ttl
