#include "ttl/models/classifier.hpp"

#include "ttl/core/error.hpp"
#include "ttl/models/init.hpp"

namespace ttl {

namespace nn = torch::nn;

namespace {

nn::Conv2d conv3(int in, int out, int stride) {
  return nn::Conv2d(nn::Conv2dOptions(in, out, 3).stride(stride).padding(1).bias(false));
}

}  // namespace

BasicBlockImpl::BasicBlockImpl(int in_channels, int out_channels, int stride) {
  conv1_ = register_module("conv1", conv3(in_channels, out_channels, stride));
  bn1_ = register_module("bn1", nn::BatchNorm2d(out_channels));
  conv2_ = register_module("conv2", conv3(out_channels, out_channels, 1));
  bn2_ = register_module("bn2", nn::BatchNorm2d(out_channels));
  if (stride != 1 || in_channels != out_channels) {
    shortcut_ = register_module(
        "shortcut",
        nn::Sequential(nn::Conv2d(nn::Conv2dOptions(in_channels, out_channels, 1).stride(stride).bias(false)),
                       nn::BatchNorm2d(out_channels)));
  }
}

torch::Tensor BasicBlockImpl::forward(const torch::Tensor& x) {
  auto out = torch::relu(bn1_->forward(conv1_->forward(x)));
  out = bn2_->forward(conv2_->forward(out));
  return torch::relu(out + (shortcut_ ? shortcut_->forward(x) : x));
}

ClassifierNetImpl::ClassifierNetImpl(const ClassifierOptions& opts) : opts_(opts) {
  const int w = opts.width;
  nn::Sequential seq;
  seq->push_back(conv3(opts.channels, w, 1));
  seq->push_back(nn::BatchNorm2d(w));
  seq->push_back(nn::ReLU());
  int in = w;
  const int strides[4] = {1, 2, 2, 2};
  for (int stage = 0; stage < 4; ++stage) {
    const int out = w << stage;
    seq->push_back(BasicBlock(in, out, strides[stage]));
    seq->push_back(BasicBlock(out, out, 1));
    in = out;
  }
  seq->push_back(nn::AdaptiveAvgPool2d(nn::AdaptiveAvgPool2dOptions(1)));
  seq->push_back(nn::Flatten());
  body_ = register_module("body", seq);
  head_ = register_module("head", nn::Linear(in, opts.num_classes));
}

torch::Tensor ClassifierNetImpl::features(const torch::Tensor& images) {
  if (images.dim() != 4 || images.size(1) != opts_.channels)
    throw Error(ErrorCode::ShapeMismatch, "classifier expects B x " + std::to_string(opts_.channels) + " x H x W");
  return body_->forward(images);
}

torch::Tensor ClassifierNetImpl::forward(const torch::Tensor& images) { return head_->forward(features(images)); }

void ClassifierNetImpl::set_trainable(bool on) {
  trainable_ = on;
  for (auto& p : parameters()) p.set_requires_grad(on);
}

torch::Tensor classifier_forward(ClassifierNet& net, const torch::Tensor& images, int chip_size) {
  if (images.dim() != 4 || images.size(2) != chip_size || images.size(3) != chip_size)
    throw Error(ErrorCode::ShapeMismatch, "classifier input must be " + std::to_string(chip_size) + "x" +
                                              std::to_string(chip_size));
  return net->forward(images);
}

ClassifierNet clone_classifier(const ClassifierNet& net) {
  ClassifierNet copy(net->options());
  {
    torch::NoGradGuard no_grad;
    cast_floating(*copy, net->parameters().front().scalar_type());
    auto src_params = net->named_parameters(true);
    for (auto& p : copy->named_parameters(true)) p.value().copy_(src_params[p.key()]);
    auto src_buffers = net->named_buffers(true);
    for (auto& b : copy->named_buffers(true)) b.value().copy_(src_buffers[b.key()]);
  }
  copy->set_trainable(net->trainable());
  if (net->is_training()) copy->train();
  else copy->eval();
  return copy;
}

ClassifierNet init_target_from_source(ClassifierNet& source) {
  auto target = clone_classifier(source);
  target->set_trainable(true);
  source->set_trainable(false);
  return target;
}

}  // namespace ttl
