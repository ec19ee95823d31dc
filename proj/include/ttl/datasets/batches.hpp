#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ttl/core/types.hpp"

namespace ttl {

/// Epoch order of `n` records; the identity when shuffle is off, otherwise a
/// permutation keyed on (seed, epoch).
std::vector<std::size_t> epoch_order(std::size_t n, bool shuffle, std::uint64_t seed, std::uint64_t epoch);

/// Stacks the chips at `indices` into one batch. Labels are attached only if
/// every selected chip has one.
TensorBatch make_batch(const ChipSet& chips, std::span<const std::size_t> indices);

/// One pass over a chip set. The final partial batch is kept.
class BatchStream {
 public:
  BatchStream(const ChipSet& chips, int batch_size, bool shuffle, std::uint64_t seed, std::uint64_t epoch);

  std::optional<TensorBatch> next();
  std::size_t num_batches() const;

 private:
  const ChipSet* chips_;
  std::size_t batch_size_;
  std::vector<std::size_t> order_;
  std::size_t pos_ = 0;
};

inline BatchStream iterate_batches(const ChipSet& chips, int batch_size, bool shuffle, std::uint64_t seed,
                                   std::uint64_t epoch = 0) {
  return BatchStream(chips, batch_size, shuffle, seed, epoch);
}

}  // namespace ttl
