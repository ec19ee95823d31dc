#pragma once

#include <torch/torch.h>

#include "ttl/core/config.hpp"
#include "ttl/losses/losses.hpp"
#include "ttl/models/bundle.hpp"

namespace ttl {

/// Images produced while evaluating the generator objective.
struct Translations {
  torch::Tensor fake_y;  // G(x)
  torch::Tensor rec_x;   // F(G(x))
  torch::Tensor fake_x;  // F(y)
  torch::Tensor rec_y;   // G(F(y))
  torch::Tensor idt_y;   // G(y)
  torch::Tensor idt_x;   // F(x)
};

/// Generator-side transductive objective on one source batch `x` (with its
/// labels) and one unlabeled target batch `y`:
///
///   L_GAN     = adv(D_y(G(x))) + adv(D_x(F(y)))
///   L_cycle   = eta1 |F(G(x)) - x| + eta2 |G(F(y)) - y|
///   L_ident   = eta3 |G(y) - y| + eta4 |F(x) - x|
///   L_CycleGAN = la L_GAN + lb L_cycle + lc L_ident
///   L_total   = L_CycleGAN + lce CE(C_source(F(G(x))), labels)
///                          + lce CE(C_target(G(x)), labels)
///
/// Only source labels enter the graph. The frozen source classifier still
/// passes gradients back to G and F.
TransductiveLoss generator_objective(ModelBundle& bundle, const torch::Tensor& x, const torch::Tensor& x_labels,
                                     const torch::Tensor& y, const LossWeights& weights, AdversarialForm form,
                                     Translations* out = nullptr);

struct DiscriminatorLoss {
  torch::Tensor total;  // adv_Dx + adv_Dy
  double adv_Dx = 0.0;
  double adv_Dy = 0.0;
};

DiscriminatorLoss discriminator_objective(ModelBundle& bundle, const torch::Tensor& real_x,
                                          const torch::Tensor& real_y, const torch::Tensor& fake_x,
                                          const torch::Tensor& fake_y, AdversarialForm form);

}  // namespace ttl
