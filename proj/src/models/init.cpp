#include "ttl/models/init.hpp"

#include "ttl/core/rng.hpp"

namespace ttl {

namespace nn = torch::nn;

void init_parameters(torch::nn::Module& net, std::uint64_t seed) {
  torch::NoGradGuard no_grad;
  auto gen = RngStreams(seed).torch_generator("init");
  for (auto& m : net.modules(/*include_self=*/true)) {
    if (auto* conv = m->as<nn::Conv2d>()) {
      conv->weight.normal_(0.0, kInitStd, gen);
      if (conv->bias.defined()) conv->bias.zero_();
    } else if (auto* deconv = m->as<nn::ConvTranspose2d>()) {
      deconv->weight.normal_(0.0, kInitStd, gen);
      if (deconv->bias.defined()) deconv->bias.zero_();
    } else if (auto* lin = m->as<nn::Linear>()) {
      lin->weight.normal_(0.0, kInitStd, gen);
      if (lin->bias.defined()) lin->bias.zero_();
    } else if (auto* bn = m->as<nn::BatchNorm2d>()) {
      bn->weight.fill_(1.0);
      bn->bias.zero_();
      bn->reset_running_stats();
    }
  }
}

void cast_floating(torch::nn::Module& net, torch::Dtype dtype) {
  torch::NoGradGuard no_grad;
  for (auto& p : net.parameters(true))
    if (p.is_floating_point()) p.set_data(p.data().to(dtype));
  for (auto& b : net.buffers(true))
    if (b.is_floating_point()) b.set_data(b.to(dtype));
}

}  // namespace ttl
