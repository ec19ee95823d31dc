#include "ttl/metrics/fid.hpp"

#include <cmath>
#include <iostream>

#include <Eigen/Eigenvalues>

#include "ttl/core/error.hpp"

namespace ttl {
namespace {

constexpr double kClampTolerance = 1e-6;

// Symmetric PSD square root with negative eigenvalues clamped to zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, int& clamp_events) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -kClampTolerance) ++clamp_events;
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

void fit_gaussian(const Eigen::MatrixXd& x, Eigen::VectorXd& mu, Eigen::MatrixXd& cov) {
  mu = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - mu.transpose();
  const double denom = x.rows() > 1 ? static_cast<double>(x.rows() - 1) : 1.0;
  cov = (centered.transpose() * centered) / denom;
}

FidResult frechet_distance(const Eigen::VectorXd& mu_a, const Eigen::MatrixXd& cov_a, const Eigen::VectorXd& mu_b,
                           const Eigen::MatrixXd& cov_b) {
  if (mu_a.size() != mu_b.size() || cov_a.rows() != mu_a.size() || cov_b.rows() != mu_b.size())
    throw Error(ErrorCode::DimensionMismatch, "moment dimensions differ");
  FidResult r;
  r.feature_dim = mu_a.size();
  const Eigen::MatrixXd root_a = psd_sqrt(cov_a, r.clamp_events);
  const Eigen::MatrixXd inner = root_a * cov_b * root_a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (inner + inner.transpose()), Eigen::EigenvaluesOnly);
  double trace_sqrt = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()[i];
    if (ev < -kClampTolerance) ++r.clamp_events;
    trace_sqrt += std::sqrt(std::max(ev, 0.0));
  }
  const double mean_term = (mu_a - mu_b).squaredNorm();
  double value = mean_term + cov_a.trace() + cov_b.trace() - 2.0 * trace_sqrt;
  if (value < 0.0) {
    if (value < -kClampTolerance) ++r.clamp_events;
    value = 0.0;
  }
  if (r.clamp_events > 0) std::clog << "fid: clamped " << r.clamp_events << " negative eigenvalue(s)\n";
  r.value = value;
  return r;
}

Eigen::MatrixXd to_eigen(const torch::Tensor& features) {
  const auto t = features.detach().to(torch::kFloat64).contiguous().cpu();
  Eigen::MatrixXd m(t.size(0), t.size(1));
  const auto acc = t.accessor<double, 2>();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = acc[i][j];
  return m;
}

FidResult fid(const torch::Tensor& features_a, const torch::Tensor& features_b) {
  if (features_a.dim() != 2 || features_b.dim() != 2 || features_a.size(1) != features_b.size(1))
    throw Error(ErrorCode::DimensionMismatch, "feature matrices must be N x D and M x D");
  if (features_a.size(0) < 2 || features_b.size(0) < 2)
    throw Error(ErrorCode::DimensionMismatch, "need at least two samples per side");
  if (!torch::isfinite(features_a).all().item<bool>() || !torch::isfinite(features_b).all().item<bool>())
    throw Error(ErrorCode::NonFiniteInput, "features contain NaN or Inf");

  Eigen::VectorXd mu_a, mu_b;
  Eigen::MatrixXd cov_a, cov_b;
  fit_gaussian(to_eigen(features_a), mu_a, cov_a);
  fit_gaussian(to_eigen(features_b), mu_b, cov_b);
  auto r = frechet_distance(mu_a, cov_a, mu_b, cov_b);
  r.samples_a = features_a.size(0);
  r.samples_b = features_b.size(0);
  r.undersampled = r.samples_a < r.feature_dim + 1 || r.samples_b < r.feature_dim + 1;
  if (r.undersampled)
    std::clog << "fid: warning: fewer samples than feature dimension + 1; covariance is singular\n";
  return r;
}

}  // namespace ttl
