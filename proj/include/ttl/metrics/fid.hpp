#pragma once

#include <cstdint>

#include <Eigen/Dense>
#include <torch/torch.h>

namespace ttl {

struct FidResult {
  double value = 0.0;
  std::int64_t feature_dim = 0;
  std::int64_t samples_a = 0;
  std::int64_t samples_b = 0;
  int clamp_events = 0;          // eigenvalues below -1e-6 that were clamped to zero
  bool undersampled = false;     // fewer than D + 1 samples on either side
};

/// Frechet distance between Gaussians with the given moments:
///   |mu_a - mu_b|^2 + Tr(S_a + S_b - 2 (S_a S_b)^(1/2)).
/// The trace of the square root is taken from the symmetric eigenvalues of
/// S_a^(1/2) S_b S_a^(1/2), which share their spectrum with S_a S_b.
FidResult frechet_distance(const Eigen::VectorXd& mu_a, const Eigen::MatrixXd& cov_a, const Eigen::VectorXd& mu_b,
                           const Eigen::MatrixXd& cov_b);

/// Fits mean and unbiased covariance to each N x D feature matrix and returns
/// their Frechet distance. Throws NonFiniteInput or DimensionMismatch.
FidResult fid(const torch::Tensor& features_a, const torch::Tensor& features_b);

/// Mean and unbiased (N - 1) covariance of an N x D matrix.
void fit_gaussian(const Eigen::MatrixXd& x, Eigen::VectorXd& mu, Eigen::MatrixXd& cov);

Eigen::MatrixXd to_eigen(const torch::Tensor& features);

}  // namespace ttl
