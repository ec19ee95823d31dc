#pragma once

#include <cstdint>
#include <string_view>

#include "ttl/core/types.hpp"
#include "ttl/models/classifier.hpp"
#include "ttl/trainer/adam.hpp"

namespace ttl::detail {

struct EpochStats {
  double mean_loss = 0.0;
  double train_accuracy = 0.0;
  std::int64_t steps = 0;
};

/// One supervised cross-entropy epoch over `chips` in a (stream, epoch)-keyed
/// shuffled order.
EpochStats train_classifier_epoch(ClassifierNet& net, Adam& opt, const ChipSet& chips, int batch_size,
                                  std::uint64_t order_seed, int epoch, double lr, double clip_norm,
                                  int max_batches);

}  // namespace ttl::detail
