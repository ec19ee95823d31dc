#include "ttl/metrics/features.hpp"

#include <torch/script.h>

#include "ttl/core/error.hpp"

namespace ttl {
namespace {

class PenultimateExtractor final : public FeatureExtractor {
 public:
  explicit PenultimateExtractor(ClassifierNet net) : net_(std::move(net)) {}

  torch::Tensor extract(const torch::Tensor& images) override {
    torch::NoGradGuard no_grad;
    const bool was_training = net_->is_training();
    net_->eval();
    const auto dtype = net_->parameters().front().scalar_type();
    auto f = net_->features(images.to(dtype)).to(torch::kFloat64);
    if (was_training) net_->train();
    return f;
  }
  std::string name() const override { return std::string(kPenultimateExtractor); }

 private:
  ClassifierNet net_;
};

/// Any TorchScript module mapping N x 3 x H x W images to N x D features,
/// e.g. a traced Inception-v3 pool3 head.
class TorchScriptExtractor final : public FeatureExtractor {
 public:
  explicit TorchScriptExtractor(const std::filesystem::path& path) {
    try {
      module_ = torch::jit::load(path.string());
    } catch (const c10::Error& e) {
      throw Error(ErrorCode::IoFailure, "cannot load TorchScript extractor " + path.string());
    }
    module_.eval();
  }

  torch::Tensor extract(const torch::Tensor& images) override {
    torch::NoGradGuard no_grad;
    auto out = module_.forward({images.to(torch::kFloat32)}).toTensor();
    return out.reshape({out.size(0), -1}).to(torch::kFloat64);
  }
  std::string name() const override { return std::string(kInceptionExtractor); }

 private:
  torch::jit::script::Module module_;
};

}  // namespace

std::unique_ptr<FeatureExtractor> make_extractor(std::string_view name, const ExtractorContext& ctx) {
  if (name == kPenultimateExtractor) {
    if (!ctx.classifier) throw Error(ErrorCode::UnknownExtractor, "classifier-penultimate needs a classifier");
    return std::make_unique<PenultimateExtractor>(ctx.classifier);
  }
  if (name == kInceptionExtractor) {
    if (ctx.torchscript_module.empty())
      throw Error(ErrorCode::UnknownExtractor, "external-inception needs a TorchScript module path");
    return std::make_unique<TorchScriptExtractor>(ctx.torchscript_module);
  }
  throw Error(ErrorCode::UnknownExtractor, "no extractor named '" + std::string(name) + "'");
}

torch::Tensor extract_features(FeatureExtractor& extractor, const torch::Tensor& images, int batch_size) {
  std::vector<torch::Tensor> parts;
  for (std::int64_t i = 0; i < images.size(0); i += batch_size)
    parts.push_back(extractor.extract(images.narrow(0, i, std::min<std::int64_t>(batch_size, images.size(0) - i))));
  return torch::cat(parts, 0);
}

}  // namespace ttl
