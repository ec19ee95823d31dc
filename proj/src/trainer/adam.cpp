#include "ttl/trainer/adam.hpp"

#include <cmath>

#include "ttl/core/error.hpp"

namespace ttl {

void step_optimizer(std::span<torch::Tensor> params, std::span<const torch::Tensor> grads, AdamState& state,
                    const AdamHyper& hyper) {
  if (params.size() != grads.size()) throw Error(ErrorCode::ShapeMismatch, "params/grads count differ");
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!grads[i].defined()) continue;
    if (grads[i].sizes() != params[i].sizes()) throw Error(ErrorCode::ShapeMismatch, "gradient shape differs");
    if (!torch::isfinite(grads[i]).all().item<bool>())
      throw Error(ErrorCode::NonFiniteGradient, "gradient " + std::to_string(i) + " is not finite");
  }
  torch::NoGradGuard no_grad;
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.push_back(torch::zeros_like(p));
      state.v.push_back(torch::zeros_like(p));
    }
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& m = state.m[i];
    auto& v = state.v[i];
    if (grads[i].defined()) {
      m.mul_(hyper.beta1).add_(grads[i], 1.0 - hyper.beta1);
      v.mul_(hyper.beta2).addcmul_(grads[i], grads[i], 1.0 - hyper.beta2);
    } else {
      m.mul_(hyper.beta1);
      v.mul_(hyper.beta2);
    }
    auto denom = (v / bc2).sqrt_().add_(hyper.eps);
    params[i].addcdiv_(m, denom, -hyper.lr / bc1);
  }
}

Adam::Adam(std::vector<torch::Tensor> params, double beta1, double beta2)
    : params_(std::move(params)), beta1_(beta1), beta2_(beta2) {}

void Adam::zero_grad() {
  for (auto& p : params_)
    if (p.grad().defined()) p.mutable_grad() = torch::Tensor();
}

void Adam::step(double lr, double clip_norm) {
  std::vector<torch::Tensor> grads;
  grads.reserve(params_.size());
  for (const auto& p : params_) grads.push_back(p.grad());
  if (clip_norm > 0.0) {
    double sq = 0.0;
    for (const auto& g : grads)
      if (g.defined()) sq += g.pow(2).sum().item<double>();
    const double norm = std::sqrt(sq);
    if (norm > clip_norm)
      for (auto& g : grads)
        if (g.defined()) g = g * (clip_norm / (norm + 1e-12));
  }
  step_optimizer(params_, grads, state_, {lr, beta1_, beta2_, 1e-8});
}

void Adam::export_state(const std::string& prefix, CheckpointData& data) const {
  data.tensors[prefix + "step"] = torch::tensor({state_.step}, torch::kInt64);
  for (std::size_t i = 0; i < state_.m.size(); ++i) {
    data.tensors[prefix + "m." + std::to_string(i)] = state_.m[i].clone();
    data.tensors[prefix + "v." + std::to_string(i)] = state_.v[i].clone();
  }
}

void Adam::import_state(const std::string& prefix, const CheckpointData& data) {
  const auto it = data.tensors.find(prefix + "step");
  if (it == data.tensors.end()) throw Error(ErrorCode::VersionMismatch, "checkpoint lacks optimizer " + prefix);
  state_ = {};
  state_.step = it->second.item<std::int64_t>();
  if (state_.step == 0) return;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto m = data.tensors.find(prefix + "m." + std::to_string(i));
    const auto v = data.tensors.find(prefix + "v." + std::to_string(i));
    if (m == data.tensors.end() || v == data.tensors.end() || m->second.sizes() != params_[i].sizes())
      throw Error(ErrorCode::VersionMismatch, "optimizer state mismatch for " + prefix);
    state_.m.push_back(m->second.clone().to(params_[i].scalar_type()));
    state_.v.push_back(v->second.clone().to(params_[i].scalar_type()));
  }
}

}  // namespace ttl
