#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ttl/core/checkpoint.hpp"
#include "ttl/core/config.hpp"
#include "ttl/models/bundle.hpp"

namespace ttl {

/// Network names used as checkpoint prefixes: G, F, Dx, Dy, source, target.
enum class Net { G, F, Dx, Dy, Source, Target };

std::string net_name(Net n);
torch::nn::Module& net_module(ModelBundle& b, Net n);

/// Stores the listed networks plus a config snapshot and `phase` tag.
CheckpointData export_bundle(ModelBundle& bundle, const std::vector<Net>& nets, const ExperimentConfig& cfg,
                             const std::string& phase);

/// Loads every network present in `data` into `bundle`; returns the list.
std::vector<Net> import_bundle(ModelBundle& bundle, const CheckpointData& data);

/// Parameter digest of the source classifier.
std::string source_digest(ModelBundle& bundle);

}  // namespace ttl
