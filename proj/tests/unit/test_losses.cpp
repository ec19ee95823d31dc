#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/gradcheck.hpp"
#include "../support/oracles.hpp"
#include "ttl/core/error.hpp"
#include "ttl/losses/losses.hpp"

using namespace ttl;

namespace {

torch::Tensor img(std::initializer_list<double> v) {
  return torch::tensor(std::vector<double>(v), torch::kFloat64).view({1, 1, 2, 2});
}

double val(const torch::Tensor& t) { return t.item<double>(); }

}  // namespace

TEST_SUITE("losses") {

TEST_CASE("closed-form values") {
  const double ln2 = std::numbers::ln2;
  const auto half = torch::zeros({1, 1, 2, 2}, torch::kFloat64);  // sigmoid(0) = 0.5
  CHECK(val(adversarial_loss(half, half, AdversarialSide::Discriminator)) == doctest::Approx(2 * ln2).epsilon(1e-15));
  CHECK(val(adversarial_loss({}, half, AdversarialSide::Generator)) == doctest::Approx(ln2).epsilon(1e-15));

  CHECK(val(cross_entropy(torch::zeros({1, 10}, torch::kFloat64), torch::tensor({3}))) ==
        doctest::Approx(std::log(10.0)).epsilon(1e-15));
  // p(true) = 0.7 over two classes.
  const auto logits = torch::tensor({std::log(0.7), std::log(0.3)}, torch::kFloat64).view({1, 2});
  CHECK(val(cross_entropy(logits, torch::tensor({0}))) == doctest::Approx(-std::log(0.7)).epsilon(1e-12));

  const auto zero = img({0, 0, 0, 0});
  CHECK(val(cycle_loss(zero, img({0.5, 0.5, 0.5, 0.5}), zero, zero, 10, 10)) == 5.0);
  CHECK(val(identity_loss(zero, img({0.2, -0.2, 0.2, -0.2}), zero, img({-0.2, 0.2, 0.2, 0.2}), 5, 5)) ==
        doctest::Approx(2.0).epsilon(1e-15));

  const auto t = transductive_total(torch::tensor(1.0, torch::kFloat64), torch::tensor(0.4, torch::kFloat64),
                                    torch::tensor(0.6, torch::kFloat64), 2.5);
  CHECK(val(t) == 3.5);
}

TEST_CASE("limits of the adversarial and cross-entropy terms") {
  const auto big = torch::full({1, 1, 2, 2}, 40.0, torch::kFloat64);
  CHECK(val(adversarial_loss(big, -big, AdversarialSide::Discriminator)) < 1e-15);
  CHECK(val(adversarial_loss({}, big, AdversarialSide::Generator)) < 1e-15);
  const auto confident = torch::tensor({50.0, -50.0}, torch::kFloat64).view({1, 2});
  CHECK(val(cross_entropy(confident, torch::tensor({0}))) < 1e-15);
  CHECK(val(cycle_loss(img({1, 2, 3, 4}), img({1, 2, 3, 4}), img({0, 1, 0, 1}), img({0, 1, 0, 1}), 10, 10)) == 0.0);
}

TEST_CASE("brute-force oracle on 2x2x1 inputs") {
  auto g = RngStreams(11).torch_generator("losses");
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = torch::randn({1, 1, 2, 2}, g, torch::kFloat64) * 3;
    const auto f = torch::randn({1, 1, 2, 2}, g, torch::kFloat64) * 3;
    const auto rv = oracle::flat(r), fv = oracle::flat(f);
    CHECK(std::fabs(val(adversarial_loss(r, f, AdversarialSide::Discriminator)) - oracle::disc_loss(rv, fv)) < 1e-9);
    CHECK(std::fabs(val(adversarial_loss(r, f, AdversarialSide::Generator)) - oracle::gen_loss(fv)) < 1e-9);
    CHECK(std::fabs(val(adversarial_loss(r, f, AdversarialSide::Discriminator, AdversarialForm::LeastSquares)) -
                    oracle::lsq_disc_loss(rv, fv)) < 1e-9);
    CHECK(std::fabs(val(adversarial_loss(r, f, AdversarialSide::Generator, AdversarialForm::LeastSquares)) -
                    oracle::lsq_gen_loss(fv)) < 1e-9);

    const auto x = torch::rand({1, 1, 2, 2}, g, torch::kFloat64), xr = torch::rand({1, 1, 2, 2}, g, torch::kFloat64);
    const auto y = torch::rand({1, 1, 2, 2}, g, torch::kFloat64), yr = torch::rand({1, 1, 2, 2}, g, torch::kFloat64);
    const double cyc = 10 * oracle::mean_abs(oracle::flat(xr), oracle::flat(x)) +
                       7 * oracle::mean_abs(oracle::flat(yr), oracle::flat(y));
    CHECK(std::fabs(val(cycle_loss(x, xr, y, yr, 10, 7)) - cyc) < 1e-9);
    const double idt = 5 * oracle::mean_abs(oracle::flat(yr), oracle::flat(y)) +
                       3 * oracle::mean_abs(oracle::flat(xr), oracle::flat(x));
    CHECK(std::fabs(val(identity_loss(y, yr, x, xr, 5, 3)) - idt) < 1e-9);

    const auto logits = torch::randn({4, 2}, g, torch::kFloat64) * 4;
    const auto labels = torch::randint(0, 2, {4}, g, torch::kInt64);
    std::vector<std::int64_t> lv(labels.data_ptr<std::int64_t>(), labels.data_ptr<std::int64_t>() + 4);
    CHECK(std::fabs(val(cross_entropy(logits, labels)) - oracle::cross_entropy(oracle::flat(logits), lv, 2)) < 1e-9);
  }
}

TEST_CASE("random 4x4 cycle oracle") {
  auto g = RngStreams(12).torch_generator("cycle");
  const auto x = torch::randn({2, 1, 4, 4}, g, torch::kFloat64), xr = torch::randn({2, 1, 4, 4}, g, torch::kFloat64);
  const auto y = torch::randn({2, 1, 4, 4}, g, torch::kFloat64), yr = torch::randn({2, 1, 4, 4}, g, torch::kFloat64);
  const double expect = 10 * oracle::mean_abs(oracle::flat(xr), oracle::flat(x)) +
                        10 * oracle::mean_abs(oracle::flat(yr), oracle::flat(y));
  CHECK(std::fabs(val(cycle_loss(x, xr, y, yr, 10, 10)) - expect) < 1e-9);
}

TEST_CASE("cyclegan total is linear in each weight") {
  CycleGanParts p{torch::tensor(0.7, torch::kFloat64), torch::tensor(1.3, torch::kFloat64),
                  torch::tensor(0.4, torch::kFloat64)};
  CHECK(val(cyclegan_total(p, 1, 1, 1)) == doctest::Approx(2.4).epsilon(1e-15));
  CHECK(val(cyclegan_total(p, 0, 0, 0)) == 0.0);
  CHECK(val(cyclegan_total(p, 1, 2, 1)) - val(cyclegan_total(p, 1, 1, 1)) == doctest::Approx(1.3).epsilon(1e-15));
  const auto cg = torch::tensor(1.7, torch::kFloat64);
  CHECK(val(transductive_total(cg, torch::tensor(0.2, torch::kFloat64), torch::tensor(0.5, torch::kFloat64), 0)) ==
        1.7);
  CHECK(val(transductive_total(cg, torch::tensor(0.2, torch::kFloat64), torch::tensor(0.5, torch::kFloat64), 0.5)) ==
        doctest::Approx(1.7 + 0.35).epsilon(1e-15));
}

TEST_CASE("losses are batch means and permutation invariant") {
  auto g = RngStreams(13).torch_generator("perm");
  const auto f = torch::randn({4, 1, 3, 3}, g, torch::kFloat64);
  const auto r = torch::randn({4, 1, 3, 3}, g, torch::kFloat64);
  const auto perm = torch::tensor({2, 0, 3, 1});
  CHECK(val(adversarial_loss(r, f, AdversarialSide::Discriminator)) ==
        doctest::Approx(val(adversarial_loss(r.index_select(0, perm), f.index_select(0, perm),
                                             AdversarialSide::Discriminator)))
            .epsilon(1e-14));
  const auto logits = torch::randn({4, 5}, g, torch::kFloat64);
  const auto labels = torch::tensor({1, 4, 0, 2});
  CHECK(val(cross_entropy(logits, labels)) ==
        doctest::Approx(val(cross_entropy(logits.index_select(0, perm), labels.index_select(0, perm)))).epsilon(1e-14));
}

TEST_CASE("loss errors") {
  const auto ok = torch::zeros({1, 1, 2, 2}, torch::kFloat64);
  auto bad = ok.clone();
  bad[0][0][1][1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(adversarial_loss(ok, bad, AdversarialSide::Discriminator), Error);
  bad[0][0][1][1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(adversarial_loss({}, bad, AdversarialSide::Generator), Error);
  CHECK_THROWS_AS(cycle_loss(ok, torch::zeros({1, 1, 2, 3}, torch::kFloat64), ok, ok, 1, 1), Error);
  CHECK_THROWS_AS(identity_loss(ok, ok, ok, torch::zeros({2, 1, 2, 2}, torch::kFloat64), 1, 1), Error);
  CHECK_THROWS_AS(cross_entropy(torch::zeros({2, 3}), torch::tensor({0, 3})), Error);
  CHECK_THROWS_AS(cross_entropy(torch::zeros({2, 3}), torch::tensor({-1, 0})), Error);
}

TEST_CASE("breakdown serialization and averaging") {
  LossBreakdown a;
  a.cycle = 2;
  a.total = 4;
  LossBreakdown b = a;
  b += a;
  const auto m = b.scaled(0.5);
  CHECK(m.cycle == 2);
  CHECK(m.total == 4);
  const auto j = m.to_json();
  for (const char* k : {"adv_G", "adv_F", "adv_Dx", "adv_Dy", "cycle", "identity", "ce_source", "ce_target", "total"})
    CHECK(j.contains(k));
}

TEST_CASE("objective gradients match finite differences") {
  const auto r = gradcheck::check_transductive_total(8, 0);
  INFO("kinks redrawn: " << r.kinks);
  INFO(r.worst);
  CHECK(r.checked == 48);
  CHECK(r.kinks <= 8);
  CHECK(r.max_rel_error < 1e-4);
}

TEST_CASE("objective breakdown composes per the weights") {
  const auto cfg = gradcheck::toy_config();
  auto bundle = make_bundle(cfg, RngStreams(3));
  bundle.to(torch::kFloat64);
  bundle.source->eval();
  auto g = RngStreams(3).torch_generator("compose");
  const auto x = torch::rand({2, 1, cfg.chip_size, cfg.chip_size}, g, torch::kFloat64) * 2 - 1;
  const auto y = torch::rand({2, 1, cfg.chip_size, cfg.chip_size}, g, torch::kFloat64) * 2 - 1;
  LossWeights w;
  w.lambda_b = 2;
  w.lambda_ce = 0.5;
  const auto l = generator_objective(bundle, x, torch::tensor({0, 1}), y, w, AdversarialForm::Logistic);
  const auto& b = l.breakdown;
  CHECK(b.cyclegan == doctest::Approx(b.adv_G + b.adv_F + 2 * b.cycle + b.identity).epsilon(1e-12));
  CHECK(b.total == doctest::Approx(b.cyclegan + 0.5 * (b.ce_source + b.ce_target)).epsilon(1e-12));
  CHECK(val(l.total) == doctest::Approx(b.total).epsilon(1e-12));
  for (double v : {b.adv_G, b.adv_F, b.cycle, b.identity, b.ce_source, b.ce_target}) CHECK(v >= 0);
}

}  // TEST_SUITE
