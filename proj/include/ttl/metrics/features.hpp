#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include <torch/torch.h>

#include "ttl/models/classifier.hpp"

namespace ttl {

class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  /// N x C x H x W images -> N x D features (float64), eval mode, no grad.
  virtual torch::Tensor extract(const torch::Tensor& images) = 0;
  virtual std::string name() const = 0;
};

/// What an extractor may be built from.
struct ExtractorContext {
  ClassifierNet classifier{nullptr};          // for "classifier-penultimate"
  std::filesystem::path torchscript_module;   // for "external-inception"
};

inline constexpr std::string_view kPenultimateExtractor = "classifier-penultimate";
inline constexpr std::string_view kInceptionExtractor = "external-inception";

/// Throws UnknownExtractor for an unregistered name or a name whose
/// prerequisites are absent from `ctx`.
std::unique_ptr<FeatureExtractor> make_extractor(std::string_view name, const ExtractorContext& ctx);

torch::Tensor extract_features(FeatureExtractor& extractor, const torch::Tensor& images, int batch_size = 256);

}  // namespace ttl
