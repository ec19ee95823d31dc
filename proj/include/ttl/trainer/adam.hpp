#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "ttl/core/checkpoint.hpp"

namespace ttl {

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<torch::Tensor> m;  // first moments
  std::vector<torch::Tensor> v;  // second moments
  std::int64_t step = 0;
};

/// One bias-corrected Adam update, in place:
///   m = b1 m + (1 - b1) g,  v = b2 v + (1 - b2) g^2
///   p -= lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
/// An undefined gradient counts as zero. Throws NonFiniteGradient before
/// touching any parameter if a gradient holds NaN or Inf.
void step_optimizer(std::span<torch::Tensor> params, std::span<const torch::Tensor> grads, AdamState& state,
                    const AdamHyper& hyper);

/// Adam over a fixed parameter list, reading `.grad()` of each parameter.
class Adam {
 public:
  Adam() = default;
  Adam(std::vector<torch::Tensor> params, double beta1, double beta2);

  void zero_grad();
  /// Optional global-norm clip (clip_norm > 0) followed by one update.
  void step(double lr, double clip_norm = 0.0);

  const AdamState& state() const { return state_; }
  AdamState& state() { return state_; }
  std::span<torch::Tensor> params() { return params_; }

  void export_state(const std::string& prefix, CheckpointData& data) const;
  void import_state(const std::string& prefix, const CheckpointData& data);

 private:
  std::vector<torch::Tensor> params_;
  AdamState state_;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
};

}  // namespace ttl
