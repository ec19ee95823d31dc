#pragma once

#include <utility>

#include <torch/torch.h>

namespace ttl {

struct DiscriminatorOptions {
  int channels = 3;
  int filters = 64;
  int downsampling = 3;  // number of stride-2 stages
};

/// Patch discriminator. Layer table (k = 4, padding 1 throughout):
///
///   stage                   stride  channels                norm
///   conv_0                  2       filters                 -      LeakyReLU(0.2)
///   conv_i, i < downsample  2       filters * min(2^i, 8)   IN     LeakyReLU(0.2)
///   conv_penultimate        1       filters * min(2^n, 8)   IN     LeakyReLU(0.2)
///   conv_out                1       1                       -      (logits)
///
/// Each conv maps a side of length L to floor((L + 2 - 4) / s) + 1. With the
/// default three stride-2 stages a 68x68 chip yields a 6x6 score map and every
/// score sees a 70x70 receptive field.
class DiscriminatorNetImpl : public torch::nn::Module {
 public:
  explicit DiscriminatorNetImpl(const DiscriminatorOptions& opts = {});

  torch::Tensor forward(const torch::Tensor& images);
  const DiscriminatorOptions& options() const { return opts_; }
  torch::nn::Sequential layers() const { return layers_; }

  /// Output score-map side length for an input side length.
  static int score_map_side(int input_side, int downsampling);
  static int receptive_field(int downsampling);

 private:
  DiscriminatorOptions opts_;
  torch::nn::Sequential layers_;
};
TORCH_MODULE(DiscriminatorNet);

torch::Tensor discriminator_forward(DiscriminatorNet& net, const torch::Tensor& images);

}  // namespace ttl
