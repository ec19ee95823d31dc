#pragma once

// Closed-form values and brute-force oracle comparisons for every loss term.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "oracles.hpp"
#include "ttl/core/rng.hpp"
#include "ttl/losses/losses.hpp"

namespace loss_checks {

struct Outcome {
  std::vector<std::string> closed_form_failures;
  double max_oracle_diff = 0.0;
  int oracle_cases = 0;
};

inline torch::Tensor img(std::initializer_list<double> v) {
  return torch::tensor(std::vector<double>(v), torch::kFloat64).view({1, 1, 2, 2});
}

inline Outcome run(int trials = 20) {
  using namespace ttl;
  Outcome o;
  // Exact up to the last couple of bits of double rounding.
  const auto expect = [&](const std::string& name, double got, double want) {
    if (std::fabs(got - want) > 4 * std::numeric_limits<double>::epsilon() * std::fabs(want))
      o.closed_form_failures.push_back(name + " = " + std::to_string(got));
  };
  const auto half = torch::zeros({1, 1, 2, 2}, torch::kFloat64);
  expect("cross-entropy of uniform logits over 10 classes",
         cross_entropy(torch::zeros({1, 10}, torch::kFloat64), torch::tensor({3})).item<double>(), std::log(10.0));
  expect("discriminator loss at sigmoid 0.5",
         adversarial_loss(half, half, AdversarialSide::Discriminator).item<double>(), 2 * std::numbers::ln2);
  expect("generator loss at sigmoid 0.5", adversarial_loss({}, half, AdversarialSide::Generator).item<double>(),
         std::numbers::ln2);
  const auto zero = img({0, 0, 0, 0});
  expect("cycle loss of a 0.5 offset at weight 10",
         cycle_loss(zero, img({0.5, 0.5, 0.5, 0.5}), zero, zero, 10, 10).item<double>(), 5.0);
  expect("identity loss of 0.2 offsets at weight 5",
         identity_loss(zero, img({0.2, -0.2, 0.2, -0.2}), zero, img({-0.2, 0.2, 0.2, 0.2}), 5, 5).item<double>(),
         2.0);

  auto g = RngStreams(11).torch_generator("losses");
  const auto record = [&](double got, double want) {
    o.max_oracle_diff = std::max(o.max_oracle_diff, std::fabs(got - want));
    ++o.oracle_cases;
  };
  for (int t = 0; t < trials; ++t) {
    const auto r = torch::randn({1, 1, 2, 2}, g, torch::kFloat64) * 3;
    const auto f = torch::randn({1, 1, 2, 2}, g, torch::kFloat64) * 3;
    const auto rv = oracle::flat(r), fv = oracle::flat(f);
    record(adversarial_loss(r, f, AdversarialSide::Discriminator).item<double>(), oracle::disc_loss(rv, fv));
    record(adversarial_loss(r, f, AdversarialSide::Generator).item<double>(), oracle::gen_loss(fv));
    record(adversarial_loss(r, f, AdversarialSide::Discriminator, AdversarialForm::LeastSquares).item<double>(),
           oracle::lsq_disc_loss(rv, fv));
    record(adversarial_loss(r, f, AdversarialSide::Generator, AdversarialForm::LeastSquares).item<double>(),
           oracle::lsq_gen_loss(fv));

    const auto x = torch::rand({1, 1, 2, 2}, g, torch::kFloat64), xr = torch::rand({1, 1, 2, 2}, g, torch::kFloat64);
    const auto y = torch::rand({1, 1, 2, 2}, g, torch::kFloat64), yr = torch::rand({1, 1, 2, 2}, g, torch::kFloat64);
    const double dx = oracle::mean_abs(oracle::flat(xr), oracle::flat(x));
    const double dy = oracle::mean_abs(oracle::flat(yr), oracle::flat(y));
    record(cycle_loss(x, xr, y, yr, 10, 7).item<double>(), 10 * dx + 7 * dy);
    record(identity_loss(y, yr, x, xr, 5, 3).item<double>(), 5 * dy + 3 * dx);

    const auto logits = torch::randn({4, 2}, g, torch::kFloat64) * 4;
    const auto labels = torch::randint(0, 2, {4}, g, torch::kInt64);
    const std::vector<std::int64_t> lv(labels.data_ptr<std::int64_t>(), labels.data_ptr<std::int64_t>() + 4);
    const double ce = oracle::cross_entropy(oracle::flat(logits), lv, 2);
    record(cross_entropy(logits, labels).item<double>(), ce);

    const double cg = std::fabs(torch::randn({1}, g, torch::kFloat64).item<double>());
    const double cs = std::fabs(torch::randn({1}, g, torch::kFloat64).item<double>());
    const auto parts = CycleGanParts{torch::tensor(dx, torch::kFloat64), torch::tensor(dy, torch::kFloat64),
                                     torch::tensor(cg, torch::kFloat64)};
    record(cyclegan_total(parts, 0.5, 2.0, 1.5).item<double>(), 0.5 * dx + 2.0 * dy + 1.5 * cg);
    record(transductive_total(torch::tensor(cg, torch::kFloat64), torch::tensor(cs, torch::kFloat64),
                              torch::tensor(ce, torch::kFloat64), 2.5)
               .item<double>(),
           cg + 2.5 * (cs + ce));
  }
  return o;
}

}  // namespace loss_checks
