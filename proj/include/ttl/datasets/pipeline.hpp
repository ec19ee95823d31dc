#pragma once

#include <cstdint>
#include <vector>

#include "ttl/core/config.hpp"
#include "ttl/core/types.hpp"

namespace ttl {

/// Projected, split chips of one domain. Images are at the canonical distance;
/// `*_capture_m` keep the recorded capture distances for per-distance reports.
struct DomainData {
  ChipSet train, val, test;
  std::vector<double> test_capture_m;
};

struct PreparedData {
  DomainData source;
  DomainData target;  // labels kept; strip them before transductive training
};

/// Projects every chip to cfg.canonical_distance_m at cfg.chip_size and splits
/// each domain 70:15:15 under cfg.seed.
PreparedData prepare_domains(const ExperimentConfig& cfg, const ChipSet& source, const ChipSet& target);

/// Copy of `chips` with capture distances replaced by `distances`.
ChipSet with_capture_distances(const ChipSet& chips, const std::vector<double>& distances);

}  // namespace ttl
