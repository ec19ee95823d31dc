#include "ttl/models/bundle.hpp"

#include <cstdio>
#include <sstream>

#include "ttl/models/init.hpp"

namespace ttl {

void ModelBundle::to(torch::Dtype dtype) {
  cast_floating(*G, dtype);
  cast_floating(*F, dtype);
  cast_floating(*Dx, dtype);
  cast_floating(*Dy, dtype);
  cast_floating(*source, dtype);
  cast_floating(*target, dtype);
}

GeneratorOptions generator_options(const ExperimentConfig& cfg) {
  return {cfg.channels, cfg.model.gen_filters, cfg.model.gen_res_blocks};
}

DiscriminatorOptions discriminator_options(const ExperimentConfig& cfg) {
  return {cfg.channels, cfg.model.disc_filters, cfg.model.disc_downsampling};
}

ClassifierOptions classifier_options(const ExperimentConfig& cfg) {
  return {cfg.channels, cfg.num_classes, cfg.model.cls_width};
}

ModelBundle make_bundle(const ExperimentConfig& cfg, const RngStreams& streams) {
  ModelBundle b;
  b.G = GeneratorNet(generator_options(cfg));
  b.F = GeneratorNet(generator_options(cfg));
  b.Dx = DiscriminatorNet(discriminator_options(cfg));
  b.Dy = DiscriminatorNet(discriminator_options(cfg));
  b.source = ClassifierNet(classifier_options(cfg));
  b.target = ClassifierNet(classifier_options(cfg));
  init_parameters(*b.G, streams.derive("net/G"));
  init_parameters(*b.F, streams.derive("net/F"));
  init_parameters(*b.Dx, streams.derive("net/Dx"));
  init_parameters(*b.Dy, streams.derive("net/Dy"));
  init_parameters(*b.source, streams.derive("net/source"));
  init_parameters(*b.target, streams.derive("net/target"));
  return b;
}

namespace {

std::int64_t count_params(const torch::nn::Module& m) {
  std::int64_t n = 0;
  for (const auto& p : m.parameters(true)) n += p.numel();
  return n;
}

std::string shape_str(const torch::Tensor& t) {
  std::string s;
  for (std::int64_t i = 1; i < t.dim(); ++i) s += (i > 1 ? "x" : "") + std::to_string(t.size(i));
  return s;
}

void table(std::ostringstream& os, const std::string& title, torch::nn::Sequential seq, torch::Tensor x) {
  char line[160];
  os << title << "\n";
  std::snprintf(line, sizeof line, "  %-4s %-22s %-14s %12s\n", "#", "layer", "output", "params");
  os << line;
  std::int64_t total = 0;
  std::size_t i = 0;
  for (auto it = seq->begin(); it != seq->end(); ++it, ++i) {
    x = it->forward(x);
    const auto n = count_params(*it->ptr());
    total += n;
    std::snprintf(line, sizeof line, "  %-4zu %-22s %-14s %12lld\n", i, it->ptr()->name().c_str(),
                  shape_str(x).c_str(), static_cast<long long>(n));
    os << line;
  }
  std::snprintf(line, sizeof line, "  total parameters: %lld\n\n", static_cast<long long>(total));
  os << line;
}

}  // namespace

std::string architecture_summary(ModelBundle& bundle, const ExperimentConfig& cfg) {
  torch::NoGradGuard no_grad;
  const auto dtype = bundle.G->parameters().front().scalar_type();
  auto x = torch::zeros({1, cfg.channels, cfg.chip_size, cfg.chip_size}, torch::TensorOptions().dtype(dtype));
  std::ostringstream os;
  os << "input: " << cfg.channels << "x" << cfg.chip_size << "x" << cfg.chip_size << "\n\n";
  table(os, "generator (G and F)", bundle.G->layers(), x);
  table(os, "discriminator (D_x and D_y)", bundle.Dx->layers(), x);

  const bool was_training = bundle.source->is_training();
  bundle.source->eval();
  table(os, "classifier body (source and target)", bundle.source->body(), x);
  os << "classifier head: Linear " << bundle.source->feature_dim() << " -> " << cfg.num_classes << " ("
     << count_params(*bundle.source->head()) << " params)\n";
  os << "classifier total parameters: " << count_params(*bundle.source) << "\n";
  if (was_training) bundle.source->train();
  return os.str();
}

}  // namespace ttl
