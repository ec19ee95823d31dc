#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ttl/core/error.hpp"
#include "ttl/core/types.hpp"
#include "ttl/datasets/manifest.hpp"

namespace ttl {

struct SplitIndices {
  std::vector<std::size_t> train, val, test;
};

/// Stratified 70:15:15 split of record indices by class label.
///
/// Overall val/test sizes are round(0.15 * N) over the classes that take part
/// in stratification; per-class quotas are apportioned by largest remainder
/// so each class is within one record of its own 15% share. Classes with
/// fewer than 3 records go wholly to train. Throws EmptyClass if a class in
/// [0, num_classes) has no records at all.
SplitIndices split_indices(std::span<const int> labels, int num_classes, std::uint64_t seed);

template <class Record>
struct DatasetSplit {
  std::vector<Record> train, val, test;
};

inline int record_label(const ChipRecord& r) { return r.label; }
inline int record_label(const ImageChip& c) {
  if (!c.label) throw Error(ErrorCode::InvalidValue, "split requires labeled chips");
  return *c.label;
}

template <class Record>
DatasetSplit<Record> split_dataset(const std::vector<Record>& records, int num_classes, std::uint64_t seed) {
  std::vector<int> labels;
  labels.reserve(records.size());
  for (const auto& r : records) labels.push_back(record_label(r));
  const auto idx = split_indices(labels, num_classes, seed);
  DatasetSplit<Record> out;
  for (const auto i : idx.train) out.train.push_back(records[i]);
  for (const auto i : idx.val) out.val.push_back(records[i]);
  for (const auto i : idx.test) out.test.push_back(records[i]);
  return out;
}

}  // namespace ttl
