#include "ttl/losses/losses.hpp"

#include "ttl/core/error.hpp"

namespace ttl {

namespace {

void require_finite(const torch::Tensor& t, const char* what) {
  if (!torch::isfinite(t.detach()).all().item<bool>())
    throw Error(ErrorCode::NonFiniteInput, std::string(what) + " contains NaN or Inf");
}

void require_same_shape(const torch::Tensor& a, const torch::Tensor& b, const char* what) {
  if (a.sizes() != b.sizes()) throw Error(ErrorCode::ShapeMismatch, std::string(what) + ": shapes differ");
}

}  // namespace

torch::Tensor adversarial_loss(const torch::Tensor& real_scores, const torch::Tensor& fake_scores,
                               AdversarialSide side, AdversarialForm form) {
  require_finite(fake_scores, "fake scores");
  if (side == AdversarialSide::Generator) {
    if (form == AdversarialForm::LeastSquares) return (fake_scores - 1).pow(2).mean();
    // -log s(f) = softplus(-f)
    return torch::softplus(-fake_scores).mean();
  }
  require_finite(real_scores, "real scores");
  if (form == AdversarialForm::LeastSquares) return (real_scores - 1).pow(2).mean() + fake_scores.pow(2).mean();
  // -log(1 - s(f)) = softplus(f)
  return torch::softplus(-real_scores).mean() + torch::softplus(fake_scores).mean();
}

torch::Tensor cycle_loss(const torch::Tensor& x, const torch::Tensor& x_reconstructed, const torch::Tensor& y,
                         const torch::Tensor& y_reconstructed, double eta1, double eta2) {
  require_same_shape(x, x_reconstructed, "cycle loss (source)");
  require_same_shape(y, y_reconstructed, "cycle loss (target)");
  return eta1 * (x_reconstructed - x).abs().mean() + eta2 * (y_reconstructed - y).abs().mean();
}

torch::Tensor identity_loss(const torch::Tensor& y, const torch::Tensor& g_of_y, const torch::Tensor& x,
                            const torch::Tensor& f_of_x, double eta3, double eta4) {
  require_same_shape(y, g_of_y, "identity loss (G)");
  require_same_shape(x, f_of_x, "identity loss (F)");
  return eta3 * (g_of_y - y).abs().mean() + eta4 * (f_of_x - x).abs().mean();
}

torch::Tensor cyclegan_total(const CycleGanParts& parts, double lambda_a, double lambda_b, double lambda_c) {
  return lambda_a * parts.adversarial + lambda_b * parts.cycle + lambda_c * parts.identity;
}

torch::Tensor cross_entropy(const torch::Tensor& logits, const torch::Tensor& labels) {
  if (logits.dim() != 2 || labels.dim() != 1 || labels.size(0) != logits.size(0))
    throw Error(ErrorCode::ShapeMismatch, "cross_entropy expects B x K logits and B labels");
  if (labels.numel() > 0) {
    const auto lo = labels.min().item<std::int64_t>();
    const auto hi = labels.max().item<std::int64_t>();
    if (lo < 0 || hi >= logits.size(1))
      throw Error(ErrorCode::LabelOutOfRange, "label outside [0, " + std::to_string(logits.size(1)) + ")");
  }
  require_finite(logits, "logits");
  return -torch::log_softmax(logits, 1).gather(1, labels.to(torch::kInt64).unsqueeze(1)).mean();
}

torch::Tensor transductive_total(const torch::Tensor& cyclegan, const torch::Tensor& ce_source,
                                 const torch::Tensor& ce_target, double lambda_ce) {
  return cyclegan + lambda_ce * ce_source + lambda_ce * ce_target;
}

nlohmann::json LossBreakdown::to_json() const {
  return {{"adv_G", adv_G},   {"adv_F", adv_F},       {"adv_Dx", adv_Dx},         {"adv_Dy", adv_Dy},
          {"cycle", cycle},   {"identity", identity}, {"ce_source", ce_source},   {"ce_target", ce_target},
          {"cyclegan", cyclegan}, {"total", total}};
}

LossBreakdown& LossBreakdown::operator+=(const LossBreakdown& o) {
  adv_G += o.adv_G;
  adv_F += o.adv_F;
  adv_Dx += o.adv_Dx;
  adv_Dy += o.adv_Dy;
  cycle += o.cycle;
  identity += o.identity;
  ce_source += o.ce_source;
  ce_target += o.ce_target;
  cyclegan += o.cyclegan;
  total += o.total;
  return *this;
}

LossBreakdown LossBreakdown::scaled(double k) const {
  LossBreakdown r = *this;
  r.adv_G *= k;
  r.adv_F *= k;
  r.adv_Dx *= k;
  r.adv_Dy *= k;
  r.cycle *= k;
  r.identity *= k;
  r.ce_source *= k;
  r.ce_target *= k;
  r.cyclegan *= k;
  r.total *= k;
  return r;
}

}  // namespace ttl
