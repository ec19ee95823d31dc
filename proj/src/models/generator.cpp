#include "ttl/models/generator.hpp"

#include "ttl/core/error.hpp"

namespace ttl {

namespace nn = torch::nn;

namespace {

nn::InstanceNorm2d instance_norm(int channels) { return nn::InstanceNorm2d(nn::InstanceNorm2dOptions(channels)); }

}  // namespace

ResidualBlockImpl::ResidualBlockImpl(int channels) {
  body_ = register_module(
      "body", nn::Sequential(nn::ReflectionPad2d(1), nn::Conv2d(nn::Conv2dOptions(channels, channels, 3)),
                             instance_norm(channels), nn::ReLU(), nn::ReflectionPad2d(1),
                             nn::Conv2d(nn::Conv2dOptions(channels, channels, 3)), instance_norm(channels)));
}

torch::Tensor ResidualBlockImpl::forward(const torch::Tensor& x) { return x + body_->forward(x); }

GeneratorNetImpl::GeneratorNetImpl(const GeneratorOptions& opts) : opts_(opts) {
  const int f = opts.filters;
  nn::Sequential seq;
  seq->push_back(nn::ReflectionPad2d(3));
  seq->push_back(nn::Conv2d(nn::Conv2dOptions(opts.channels, f, 7)));
  seq->push_back(instance_norm(f));
  seq->push_back(nn::ReLU());
  for (int i = 0; i < 2; ++i) {
    const int in = f << i;
    seq->push_back(nn::Conv2d(nn::Conv2dOptions(in, in * 2, 3).stride(2).padding(1)));
    seq->push_back(instance_norm(in * 2));
    seq->push_back(nn::ReLU());
  }
  for (int i = 0; i < opts.res_blocks; ++i) seq->push_back(ResidualBlock(f * 4));
  for (int i = 2; i > 0; --i) {
    const int in = f << i;
    seq->push_back(
        nn::ConvTranspose2d(nn::ConvTranspose2dOptions(in, in / 2, 3).stride(2).padding(1).output_padding(1)));
    seq->push_back(instance_norm(in / 2));
    seq->push_back(nn::ReLU());
  }
  seq->push_back(nn::ReflectionPad2d(3));
  seq->push_back(nn::Conv2d(nn::Conv2dOptions(f, opts.channels, 7)));
  seq->push_back(nn::Tanh());
  layers_ = register_module("layers", seq);
}

torch::Tensor GeneratorNetImpl::forward(const torch::Tensor& images) {
  if (images.dim() != 4 || images.size(1) != opts_.channels || images.size(2) % 4 != 0 || images.size(3) % 4 != 0)
    throw Error(ErrorCode::ShapeMismatch, "generator expects B x " + std::to_string(opts_.channels) +
                                              " x H x W with H, W multiples of 4");
  return layers_->forward(images);
}

torch::Tensor generator_forward(GeneratorNet& net, const torch::Tensor& images, int chip_size) {
  if (images.dim() != 4 || images.size(2) != chip_size || images.size(3) != chip_size)
    throw Error(ErrorCode::ShapeMismatch, "generator input must be " + std::to_string(chip_size) + "x" +
                                              std::to_string(chip_size));
  return net->forward(images);
}

}  // namespace ttl
