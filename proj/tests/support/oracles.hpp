#pragma once

// Straight-line reference implementations used by unit and acceptance tests.
// Each works on plain std::vector<double> so it shares no code path with the
// tensor implementations under test.

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <torch/torch.h>

namespace oracle {

inline std::vector<double> flat(const torch::Tensor& t) {
  const auto c = t.to(torch::kFloat64).contiguous().flatten();
  return {c.data_ptr<double>(), c.data_ptr<double>() + c.numel()};
}

inline double log_sigmoid(double z) { return z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z)); }

inline double disc_loss(const std::vector<double>& real, const std::vector<double>& fake) {
  double a = 0, b = 0;
  for (double r : real) a += -log_sigmoid(r);
  for (double f : fake) b += -log_sigmoid(-f);  // -log(1 - s(f))
  return a / real.size() + b / fake.size();
}

inline double gen_loss(const std::vector<double>& fake) {
  double a = 0;
  for (double f : fake) a += -log_sigmoid(f);
  return a / fake.size();
}

inline double lsq_disc_loss(const std::vector<double>& real, const std::vector<double>& fake) {
  double a = 0, b = 0;
  for (double r : real) a += (r - 1) * (r - 1);
  for (double f : fake) b += f * f;
  return a / real.size() + b / fake.size();
}

inline double lsq_gen_loss(const std::vector<double>& fake) {
  double a = 0;
  for (double f : fake) a += (f - 1) * (f - 1);
  return a / fake.size();
}

inline double mean_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s / a.size();
}

/// Rows of `logits` (B x K, row-major), labels in [0, K).
inline double cross_entropy(const std::vector<double>& logits, const std::vector<std::int64_t>& labels, int k) {
  double total = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double m = logits[i * k];
    for (int j = 1; j < k; ++j) m = std::max(m, logits[i * k + j]);
    double z = 0;
    for (int j = 0; j < k; ++j) z += std::exp(logits[i * k + j] - m);
    total += -(logits[i * k + labels[i]] - m - std::log(z));
  }
  return total / labels.size();
}

/// Frechet distance between two Gaussians through the nonsymmetric
/// eigenvalues of S_a S_b: Tr((S_a S_b)^(1/2)) = sum sqrt(lambda_i).
inline double frechet(const Eigen::VectorXd& mu_a, const Eigen::MatrixXd& s_a, const Eigen::VectorXd& mu_b,
                      const Eigen::MatrixXd& s_b) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(s_a * s_b);
  double tr_sqrt = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) tr_sqrt += std::sqrt(std::max(0.0, es.eigenvalues()[i].real()));
  return (mu_a - mu_b).squaredNorm() + s_a.trace() + s_b.trace() - 2 * tr_sqrt;
}

/// Column means and (N - 1) covariance by explicit loops.
inline void moments(const std::vector<std::vector<double>>& rows, Eigen::VectorXd& mu, Eigen::MatrixXd& cov) {
  const auto n = rows.size();
  const auto d = rows.front().size();
  mu = Eigen::VectorXd::Zero(d);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < d; ++j) mu[j] += r[j] / n;
  cov = Eigen::MatrixXd::Zero(d, d);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) cov(i, j) += (r[i] - mu[i]) * (r[j] - mu[j]) / (n - 1);
}

/// Hand-executed Adam for a scalar parameter.
struct ScalarAdam {
  double m = 0, v = 0;
  int t = 0;
  double step(double p, double g, double lr, double b1, double b2, double eps = 1e-8) {
    ++t;
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mh = m / (1 - std::pow(b1, t));
    const double vh = v / (1 - std::pow(b2, t));
    return p - lr * mh / (std::sqrt(vh) + eps);
  }
};

}  // namespace oracle
