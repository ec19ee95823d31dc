#include "ttl/datasets/batches.hpp"

#include <algorithm>
#include <numeric>

#include "ttl/core/error.hpp"
#include "ttl/core/rng.hpp"

namespace ttl {

std::vector<std::size_t> epoch_order(std::size_t n, bool shuffle, std::uint64_t seed, std::uint64_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (shuffle) {
    auto eng = RngStreams(seed).engine("batch-order", epoch);
    std::shuffle(order.begin(), order.end(), eng);
  }
  return order;
}

TensorBatch make_batch(const ChipSet& chips, std::span<const std::size_t> indices) {
  if (indices.empty()) throw Error(ErrorCode::DataEmpty, "empty batch");
  std::vector<torch::Tensor> images;
  images.reserve(indices.size());
  std::vector<std::int64_t> labels;
  bool all_labeled = true;
  for (const auto i : indices) {
    images.push_back(chips[i].pixels);
    if (chips[i].label) labels.push_back(*chips[i].label);
    else all_labeled = false;
  }
  TensorBatch batch;
  batch.images = torch::stack(images);
  batch.domain = chips[indices.front()].domain;
  if (all_labeled) batch.labels = torch::tensor(labels, torch::kInt64);
  return batch;
}

BatchStream::BatchStream(const ChipSet& chips, int batch_size, bool shuffle, std::uint64_t seed,
                         std::uint64_t epoch)
    : chips_(&chips),
      batch_size_(static_cast<std::size_t>(batch_size)),
      order_(epoch_order(chips.size(), shuffle, seed, epoch)) {
  if (batch_size < 1) throw Error(ErrorCode::InvalidValue, "batch_size must be >= 1");
}

std::optional<TensorBatch> BatchStream::next() {
  if (pos_ >= order_.size()) return std::nullopt;
  const auto n = std::min(batch_size_, order_.size() - pos_);
  auto batch = make_batch(*chips_, std::span(order_).subspan(pos_, n));
  pos_ += n;
  return batch;
}

std::size_t BatchStream::num_batches() const { return (order_.size() + batch_size_ - 1) / batch_size_; }

}  // namespace ttl
