#include "detail.hpp"

#include <cmath>

#include "ttl/core/error.hpp"
#include "ttl/datasets/batches.hpp"
#include "ttl/losses/losses.hpp"

namespace ttl::detail {

EpochStats train_classifier_epoch(ClassifierNet& net, Adam& opt, const ChipSet& chips, int batch_size,
                                  std::uint64_t order_seed, int epoch, double lr, double clip_norm,
                                  int max_batches) {
  net->train();
  const auto dtype = net->parameters().front().scalar_type();
  auto stream = iterate_batches(chips, batch_size, /*shuffle=*/true, order_seed, static_cast<std::uint64_t>(epoch));
  EpochStats stats;
  double loss_sum = 0.0;
  std::int64_t correct = 0, seen = 0;
  while (auto batch = stream.next()) {
    if (max_batches > 0 && stats.steps >= max_batches) break;
    if (!batch->labels) throw Error(ErrorCode::InvalidValue, "classifier training requires labels");
    opt.zero_grad();
    const auto logits = net->forward(batch->images.to(dtype));
    const auto loss = cross_entropy(logits, *batch->labels);
    const double value = loss.item<double>();
    if (!std::isfinite(value)) throw Error(ErrorCode::Diverged, "classifier loss is not finite");
    loss.backward();
    opt.step(lr, clip_norm);
    loss_sum += value * static_cast<double>(batch->size());
    correct += logits.argmax(1).eq(*batch->labels).sum().item<std::int64_t>();
    seen += batch->size();
    ++stats.steps;
  }
  if (seen > 0) {
    stats.mean_loss = loss_sum / static_cast<double>(seen);
    stats.train_accuracy = static_cast<double>(correct) / static_cast<double>(seen);
  }
  return stats;
}

}  // namespace ttl::detail
