#include "ttl/models/discriminator.hpp"

#include <algorithm>

#include "ttl/core/error.hpp"

namespace ttl {

namespace nn = torch::nn;

namespace {

nn::Conv2d conv4(int in, int out, int stride) {
  return nn::Conv2d(nn::Conv2dOptions(in, out, 4).stride(stride).padding(1));
}

nn::LeakyReLU leaky() { return nn::LeakyReLU(nn::LeakyReLUOptions().negative_slope(0.2)); }

}  // namespace

DiscriminatorNetImpl::DiscriminatorNetImpl(const DiscriminatorOptions& opts) : opts_(opts) {
  const int f = opts.filters;
  nn::Sequential seq;
  seq->push_back(conv4(opts.channels, f, 2));
  seq->push_back(leaky());
  int width = f;
  for (int i = 1; i < opts.downsampling; ++i) {
    const int next = f * std::min(1 << i, 8);
    seq->push_back(conv4(width, next, 2));
    seq->push_back(nn::InstanceNorm2d(nn::InstanceNorm2dOptions(next)));
    seq->push_back(leaky());
    width = next;
  }
  const int last = f * std::min(1 << opts.downsampling, 8);
  seq->push_back(conv4(width, last, 1));
  seq->push_back(nn::InstanceNorm2d(nn::InstanceNorm2dOptions(last)));
  seq->push_back(leaky());
  seq->push_back(conv4(last, 1, 1));
  layers_ = register_module("layers", seq);
}

torch::Tensor DiscriminatorNetImpl::forward(const torch::Tensor& images) {
  if (images.dim() != 4 || images.size(1) != opts_.channels)
    throw Error(ErrorCode::ShapeMismatch, "discriminator expects B x " + std::to_string(opts_.channels) + " x H x W");
  const auto h = score_map_side(static_cast<int>(images.size(2)), opts_.downsampling);
  const auto w = score_map_side(static_cast<int>(images.size(3)), opts_.downsampling);
  if (h < 1 || w < 1) throw Error(ErrorCode::ShapeMismatch, "discriminator input too small");
  return layers_->forward(images);
}

int DiscriminatorNetImpl::score_map_side(int input_side, int downsampling) {
  auto conv = [](int l, int s) { return (l + 2 - 4) / s + 1; };
  int l = input_side;
  for (int i = 0; i < downsampling; ++i) l = conv(l, 2);
  return conv(conv(l, 1), 1);
}

int DiscriminatorNetImpl::receptive_field(int downsampling) {
  int rf = 1;
  rf = rf + 3;  // conv_out
  rf = rf + 3;  // penultimate
  for (int i = 0; i < downsampling; ++i) rf = rf * 2 + 2;
  return rf;
}

torch::Tensor discriminator_forward(DiscriminatorNet& net, const torch::Tensor& images) {
  return net->forward(images);
}

}  // namespace ttl
