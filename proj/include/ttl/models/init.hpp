#pragma once

#include <cstdint>

#include <torch/torch.h>

namespace ttl {

inline constexpr double kInitStd = 0.02;

/// Convolution and linear weights ~ N(0, 0.02), biases zero, norm layers
/// weight 1 / bias 0 with reset running statistics. Deterministic in `seed`.
void init_parameters(torch::nn::Module& net, std::uint64_t seed);

/// Casts floating parameters and buffers to `dtype`; integer buffers such as
/// batch-norm step counters keep their type.
void cast_floating(torch::nn::Module& net, torch::Dtype dtype);

}  // namespace ttl
