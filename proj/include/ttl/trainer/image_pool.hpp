#pragma once

#include <random>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "ttl/core/checkpoint.hpp"

namespace ttl {

/// History of generated images fed to a discriminator. Until full, every
/// image is stored and returned as is. Once full, each image is, with
/// probability 1/2, swapped with a random stored one (the stored one is
/// returned), otherwise returned unchanged.
class ImagePool {
 public:
  explicit ImagePool(int capacity = 50) : capacity_(capacity) {}

  torch::Tensor query(const torch::Tensor& images, std::mt19937_64& rng);
  std::size_t size() const { return images_.size(); }
  int capacity() const { return capacity_; }

  void export_state(const std::string& prefix, CheckpointData& data) const;
  void import_state(const std::string& prefix, const CheckpointData& data);

 private:
  int capacity_;
  std::vector<torch::Tensor> images_;
};

}  // namespace ttl
