#pragma once

#include <string>

#include "ttl/core/config.hpp"
#include "ttl/core/rng.hpp"
#include "ttl/models/classifier.hpp"
#include "ttl/models/discriminator.hpp"
#include "ttl/models/generator.hpp"

namespace ttl {

/// G translates source -> target, F target -> source; D_y judges target
/// images, D_x source images.
struct ModelBundle {
  GeneratorNet G{nullptr};
  GeneratorNet F{nullptr};
  DiscriminatorNet Dx{nullptr};
  DiscriminatorNet Dy{nullptr};
  ClassifierNet source{nullptr};
  ClassifierNet target{nullptr};

  void to(torch::Dtype dtype);
};

GeneratorOptions generator_options(const ExperimentConfig& cfg);
DiscriminatorOptions discriminator_options(const ExperimentConfig& cfg);
ClassifierOptions classifier_options(const ExperimentConfig& cfg);

/// Builds and initializes all networks from per-network RNG streams.
ModelBundle make_bundle(const ExperimentConfig& cfg, const RngStreams& streams);

/// Layer table (name, output shape, parameter count) for each network at the
/// configured chip size.
std::string architecture_summary(ModelBundle& bundle, const ExperimentConfig& cfg);

}  // namespace ttl
