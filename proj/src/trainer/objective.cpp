#include "ttl/trainer/objective.hpp"

namespace ttl {

TransductiveLoss generator_objective(ModelBundle& bundle, const torch::Tensor& x, const torch::Tensor& x_labels,
                                     const torch::Tensor& y, const LossWeights& weights, AdversarialForm form,
                                     Translations* out) {
  Translations t;
  t.fake_y = bundle.G->forward(x);
  t.rec_x = bundle.F->forward(t.fake_y);
  t.fake_x = bundle.F->forward(y);
  t.rec_y = bundle.G->forward(t.fake_x);
  t.idt_y = bundle.G->forward(y);
  t.idt_x = bundle.F->forward(x);

  const auto adv_G = adversarial_loss({}, bundle.Dy->forward(t.fake_y), AdversarialSide::Generator, form);
  const auto adv_F = adversarial_loss({}, bundle.Dx->forward(t.fake_x), AdversarialSide::Generator, form);
  const auto cycle = cycle_loss(x, t.rec_x, y, t.rec_y, weights.eta1, weights.eta2);
  const auto identity = identity_loss(y, t.idt_y, x, t.idt_x, weights.eta3, weights.eta4);
  const auto cyclegan =
      cyclegan_total({adv_G + adv_F, cycle, identity}, weights.lambda_a, weights.lambda_b, weights.lambda_c);

  const auto ce_source = cross_entropy(bundle.source->forward(t.rec_x), x_labels);
  const auto ce_target = cross_entropy(bundle.target->forward(t.fake_y), x_labels);

  TransductiveLoss loss;
  loss.total = transductive_total(cyclegan, ce_source, ce_target, weights.lambda_ce);
  auto& b = loss.breakdown;
  b.adv_G = adv_G.item<double>();
  b.adv_F = adv_F.item<double>();
  b.cycle = cycle.item<double>();
  b.identity = identity.item<double>();
  b.ce_source = ce_source.item<double>();
  b.ce_target = ce_target.item<double>();
  b.cyclegan = cyclegan.item<double>();
  b.total = loss.total.item<double>();
  if (out) *out = std::move(t);
  return loss;
}

DiscriminatorLoss discriminator_objective(ModelBundle& bundle, const torch::Tensor& real_x,
                                          const torch::Tensor& real_y, const torch::Tensor& fake_x,
                                          const torch::Tensor& fake_y, AdversarialForm form) {
  const auto dx = adversarial_loss(bundle.Dx->forward(real_x), bundle.Dx->forward(fake_x.detach()),
                                   AdversarialSide::Discriminator, form);
  const auto dy = adversarial_loss(bundle.Dy->forward(real_y), bundle.Dy->forward(fake_y.detach()),
                                   AdversarialSide::Discriminator, form);
  return {dx + dy, dx.item<double>(), dy.item<double>()};
}

}  // namespace ttl
