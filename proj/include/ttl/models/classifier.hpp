#pragma once

#include <torch/torch.h>

namespace ttl {

struct ClassifierOptions {
  int channels = 3;
  int num_classes = 10;
  int width = 64;  // stage widths are width, 2w, 4w, 8w
};

class BasicBlockImpl : public torch::nn::Module {
 public:
  BasicBlockImpl(int in_channels, int out_channels, int stride);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  torch::nn::Conv2d conv1_{nullptr}, conv2_{nullptr};
  torch::nn::BatchNorm2d bn1_{nullptr}, bn2_{nullptr};
  torch::nn::Sequential shortcut_{nullptr};
};
TORCH_MODULE(BasicBlock);

/// 18-layer residual classifier for small chips: a 3x3 stride-1 stem without
/// max-pooling (instead of the 7x7/2 + pool stem used at 224 px), four stages
/// of two basic blocks with strides 1, 2, 2, 2, global average pooling and a
/// linear head.
class ClassifierNetImpl : public torch::nn::Module {
 public:
  explicit ClassifierNetImpl(const ClassifierOptions& opts = {});

  torch::Tensor forward(const torch::Tensor& images);
  /// Pooled pre-head features, B x feature_dim().
  torch::Tensor features(const torch::Tensor& images);
  int feature_dim() const { return 8 * opts_.width; }

  const ClassifierOptions& options() const { return opts_; }
  torch::nn::Sequential body() const { return body_; }
  torch::nn::Linear head() const { return head_; }

  bool trainable() const { return trainable_; }
  /// Toggles requires_grad on every parameter.
  void set_trainable(bool on);

 private:
  ClassifierOptions opts_;
  torch::nn::Sequential body_;
  torch::nn::Linear head_{nullptr};
  bool trainable_ = true;
};
TORCH_MODULE(ClassifierNet);

torch::Tensor classifier_forward(ClassifierNet& net, const torch::Tensor& images, int chip_size);

/// Deep copy with the same options, parameters, buffers, mode and
/// trainable flag.
ClassifierNet clone_classifier(const ClassifierNet& net);

/// Returns a trainable copy of `source` (parameters and buffers equal
/// elementwise) and marks `source` frozen.
ClassifierNet init_target_from_source(ClassifierNet& source);

}  // namespace ttl
