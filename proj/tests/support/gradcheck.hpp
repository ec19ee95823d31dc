#pragma once

// Central finite-difference check of the transductive objective through toy
// instances of every network.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <torch/torch.h>

#include "ttl/core/rng.hpp"
#include "ttl/models/bundle.hpp"
#include "ttl/trainer/objective.hpp"

namespace gradcheck {

struct Result {
  double max_rel_error = 0.0;
  int checked = 0;
  int kinks = 0;  // entries redrawn because a ReLU kink lay within h
  std::string worst;
};

inline ttl::ExperimentConfig toy_config() {
  ttl::ExperimentConfig cfg;
  cfg.num_classes = 3;
  cfg.channels = 1;
  cfg.chip_size = 16;
  cfg.model = {4, 1, 4, 1, 2};
  return cfg;
}

/// Relative error |a - n| / max(|a|, |n|). Pairs where both magnitudes are
/// below `floor` are compared absolutely instead, since round-off in the
/// difference quotient is about 1e-10 at h = 1e-5.
inline double rel_error(double a, double n, double floor = 1e-6) {
  const double scale = std::max(std::fabs(a), std::fabs(n));
  if (scale < floor) return std::fabs(a - n) < 1e-9 ? 0.0 : std::fabs(a - n) / floor;
  return std::fabs(a - n) / scale;
}

/// Checks `per_net` randomly chosen parameter entries of each of G, F, D_x,
/// D_y and the target classifier, plus input pixels of x (which reach the
/// frozen source classifier through F(G(x))).
inline Result check_transductive_total(int per_net = 12, std::uint64_t seed = 0, double lambda_ce = 2.5,
                                       double h = 1e-5) {
  const auto cfg = toy_config();
  auto bundle = ttl::make_bundle(cfg, ttl::RngStreams(seed));
  bundle.to(torch::kFloat64);
  bundle.source->eval();
  bundle.source->set_trainable(false);
  bundle.target = ttl::init_target_from_source(bundle.source);
  bundle.target->train();
  // Move BN statistics and weights away from their symmetric init values.
  {
    torch::NoGradGuard ng;
    auto g = ttl::RngStreams(seed).torch_generator("gradcheck/perturb");
    for (auto& p : bundle.target->parameters()) p.add_(torch::randn(p.sizes(), g, torch::kFloat64) * 0.1);
  }

  auto g = ttl::RngStreams(seed).torch_generator("gradcheck/data");
  auto x = (torch::rand({2, 1, cfg.chip_size, cfg.chip_size}, g, torch::kFloat64) * 2 - 1).requires_grad_(true);
  const auto y = torch::rand({2, 1, cfg.chip_size, cfg.chip_size}, g, torch::kFloat64) * 2 - 1;
  const auto labels = torch::tensor({0, 2}, torch::kInt64);
  ttl::LossWeights w;
  w.lambda_ce = lambda_ce;

  auto total = [&]() { return ttl::generator_objective(bundle, x, labels, y, w, ttl::AdversarialForm::Logistic).total; };

  for (auto& p : bundle.target->parameters()) p.mutable_grad() = torch::Tensor();
  total().backward();

  struct Net {
    std::string name;
    std::vector<torch::Tensor> params;
  };
  std::vector<Net> nets{{"G", bundle.G->parameters()},   {"F", bundle.F->parameters()},
                        {"Dx", bundle.Dx->parameters()}, {"Dy", bundle.Dy->parameters()},
                        {"target", bundle.target->parameters()}, {"x", {x}}};
  Result r;
  std::mt19937_64 pick(seed);
  torch::NoGradGuard ng;
  for (auto& net : nets) {
    std::int64_t count = 0;
    for (const auto& p : net.params) count += p.numel();
    for (int k = 0; k < per_net;) {
      auto flat_index = std::uniform_int_distribution<std::int64_t>(0, count - 1)(pick);
      std::size_t which = 0;
      while (flat_index >= net.params[which].numel()) flat_index -= net.params[which++].numel();
      auto p = net.params[which];
      auto flat = p.view({-1});
      const auto grad = p.grad();
      const double analytic = grad.defined() ? grad.view({-1})[flat_index].item<double>() : 0.0;
      const double orig = flat[flat_index].item<double>();
      auto central = [&](double step) {
        flat[flat_index] = orig + step;
        const double up = total().item<double>();
        flat[flat_index] = orig - step;
        const double down = total().item<double>();
        flat[flat_index] = orig;
        return (up - down) / (2 * step);
      };
      const double numeric = central(h);
      // Smooth points give matching quotients at h and h/2; a kink between
      // them shifts the two by different amounts.
      if (std::fabs(numeric - central(h / 2)) > 1e-6 * std::max(1.0, std::fabs(numeric))) {
        if (++r.kinks > 10 * per_net) break;
        continue;
      }
      ++k;
      const double e = rel_error(analytic, numeric);
      ++r.checked;
      if (e > r.max_rel_error) {
        r.max_rel_error = e;
        r.worst = net.name + "[" + std::to_string(which) + "," + std::to_string(flat_index) +
                  "] analytic=" + std::to_string(analytic) + " numeric=" + std::to_string(numeric);
      }
    }
  }
  return r;
}

}  // namespace gradcheck
