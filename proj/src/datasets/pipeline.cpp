#include "ttl/datasets/pipeline.hpp"

#include "ttl/core/error.hpp"
#include "ttl/core/rng.hpp"
#include "ttl/datasets/projection.hpp"
#include "ttl/datasets/split.hpp"

namespace ttl {

namespace {

DomainData prepare_one(const ExperimentConfig& cfg, const ChipSet& chips, std::uint64_t split_seed) {
  auto parts = split_dataset(chips, cfg.num_classes, split_seed);
  DomainData out;
  const auto project_all = [&](const ChipSet& in, ChipSet& dst) {
    dst.reserve(in.size());
    for (const auto& c : in) dst.push_back(project_to_canonical(c, cfg.canonical_distance_m, cfg.chip_size));
  };
  for (const auto& c : parts.test) out.test_capture_m.push_back(c.capture_distance_m.value_or(0.0));
  project_all(parts.train, out.train);
  project_all(parts.val, out.val);
  project_all(parts.test, out.test);
  return out;
}

}  // namespace

PreparedData prepare_domains(const ExperimentConfig& cfg, const ChipSet& source, const ChipSet& target) {
  const RngStreams streams(cfg.seed);
  return {prepare_one(cfg, source, streams.derive("split/source")),
          prepare_one(cfg, target, streams.derive("split/target"))};
}

ChipSet with_capture_distances(const ChipSet& chips, const std::vector<double>& distances) {
  if (chips.size() != distances.size())
    throw Error(ErrorCode::DimensionMismatch, "chip and distance counts differ");
  ChipSet out = chips;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].capture_distance_m = distances[i];
  return out;
}

}  // namespace ttl
