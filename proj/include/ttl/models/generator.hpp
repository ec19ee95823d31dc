#pragma once

#include <torch/torch.h>

namespace ttl {

struct GeneratorOptions {
  int channels = 3;
  int filters = 64;
  int res_blocks = 6;
};

/// Two 3x3 reflection-padded convolutions with instance norm and an identity
/// skip.
class ResidualBlockImpl : public torch::nn::Module {
 public:
  explicit ResidualBlockImpl(int channels);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  torch::nn::Sequential body_;
};
TORCH_MODULE(ResidualBlock);

/// Translation generator:
///   7x7 conv -> 2 x (3x3 stride-2 conv) -> R residual blocks
///   -> 2 x (3x3 stride-2 transposed conv) -> 7x7 conv -> tanh.
/// Every stage but the last uses instance norm + ReLU. Spatial size is
/// preserved for inputs whose height and width are multiples of 4.
class GeneratorNetImpl : public torch::nn::Module {
 public:
  explicit GeneratorNetImpl(const GeneratorOptions& opts = {});

  torch::Tensor forward(const torch::Tensor& images);
  const GeneratorOptions& options() const { return opts_; }
  torch::nn::Sequential layers() const { return layers_; }

 private:
  GeneratorOptions opts_;
  torch::nn::Sequential layers_;
};
TORCH_MODULE(GeneratorNet);

/// Checked forward pass: images must be B x C x chip_size x chip_size.
torch::Tensor generator_forward(GeneratorNet& net, const torch::Tensor& images, int chip_size);

}  // namespace ttl
