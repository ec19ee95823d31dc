#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <torch/torch.h>

namespace ttl {

enum class Domain : std::uint8_t { Source, Target };

std::string_view to_string(Domain d);
Domain domain_from_string(std::string_view s);

/// One image chip. Pixels are stored channel-first (C x H x W, float32) to
/// match the convolution layout; values are in [-1, 1].
struct ImageChip {
  torch::Tensor pixels;
  Domain domain = Domain::Source;
  std::optional<int> label;
  std::optional<double> capture_distance_m;
};

/// Throws InvalidValue if the chip breaks any of its invariants.
void validate_chip(const ImageChip& chip, int num_classes);

/// A batch of chips: images are B x C x H x W.
struct TensorBatch {
  torch::Tensor images;
  std::optional<torch::Tensor> labels;  // int64, length B
  Domain domain = Domain::Source;

  std::int64_t size() const { return images.size(0); }
};

/// Scalar weights of the cycle, identity, CycleGAN and transductive objectives.
struct LossWeights {
  double eta1 = 10.0;  // source -> target -> source cycle
  double eta2 = 10.0;  // target -> source -> target cycle
  double eta3 = 5.0;   // G identity on target images
  double eta4 = 5.0;   // F identity on source images
  double lambda_a = 1.0;
  double lambda_b = 1.0;
  double lambda_c = 1.0;
  double lambda_ce = 0.5;

  void validate() const;
  bool operator==(const LossWeights&) const = default;
};

using ChipSet = std::vector<ImageChip>;

/// Copy of `chips` with every label removed.
ChipSet strip_labels(const ChipSet& chips);

}  // namespace ttl
