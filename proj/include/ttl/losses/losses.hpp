#pragma once

#include <json.hpp>
#include <torch/torch.h>

#include "ttl/core/config.hpp"

namespace ttl {

enum class AdversarialSide { Generator, Discriminator };

/// Patch-averaged adversarial loss on discriminator logit maps.
///
/// Logistic form:
///   DISCRIMINATOR: mean(-log s(real)) + mean(-log(1 - s(fake)))
///   GENERATOR:     mean(-log s(fake))   (non-saturating)
/// Least-squares form:
///   DISCRIMINATOR: mean((real - 1)^2) + mean(fake^2)
///   GENERATOR:     mean((fake - 1)^2)
/// `real` is ignored on the generator side and may be undefined. Throws
/// NonFiniteInput if a score map holds NaN or Inf.
torch::Tensor adversarial_loss(const torch::Tensor& real_scores, const torch::Tensor& fake_scores,
                               AdversarialSide side, AdversarialForm form = AdversarialForm::Logistic);

/// eta1 * mean|F(G(x)) - x| + eta2 * mean|G(F(y)) - y|
torch::Tensor cycle_loss(const torch::Tensor& x, const torch::Tensor& x_reconstructed, const torch::Tensor& y,
                         const torch::Tensor& y_reconstructed, double eta1, double eta2);

/// eta3 * mean|G(y) - y| + eta4 * mean|F(x) - x|
torch::Tensor identity_loss(const torch::Tensor& y, const torch::Tensor& g_of_y, const torch::Tensor& x,
                            const torch::Tensor& f_of_x, double eta3, double eta4);

struct CycleGanParts {
  torch::Tensor adversarial;  // generator-side adversarial terms of both directions
  torch::Tensor cycle;
  torch::Tensor identity;
};

torch::Tensor cyclegan_total(const CycleGanParts& parts, double lambda_a, double lambda_b, double lambda_c);

/// Batch mean of -log softmax(logits)[label]. Throws LabelOutOfRange.
torch::Tensor cross_entropy(const torch::Tensor& logits, const torch::Tensor& labels);

/// Scalar record of every term of one transductive step.
struct LossBreakdown {
  double adv_G = 0, adv_F = 0, adv_Dx = 0, adv_Dy = 0;
  double cycle = 0, identity = 0;
  double ce_source = 0, ce_target = 0;
  double cyclegan = 0, total = 0;

  nlohmann::json to_json() const;
  LossBreakdown& operator+=(const LossBreakdown& o);
  LossBreakdown scaled(double k) const;
};

struct TransductiveLoss {
  torch::Tensor total;  // differentiable
  LossBreakdown breakdown;
};

/// L_CycleGAN + lambda_ce * (L_CE-source + L_CE-target).
torch::Tensor transductive_total(const torch::Tensor& cyclegan, const torch::Tensor& ce_source,
                                 const torch::Tensor& ce_target, double lambda_ce);

}  // namespace ttl
