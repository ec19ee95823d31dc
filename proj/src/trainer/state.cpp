#include "ttl/trainer/state.hpp"

#include "ttl/core/digest.hpp"
#include "ttl/core/error.hpp"

namespace ttl {

namespace {
constexpr Net kAllNets[] = {Net::G, Net::F, Net::Dx, Net::Dy, Net::Source, Net::Target};
}

std::string net_name(Net n) {
  switch (n) {
    case Net::G: return "G";
    case Net::F: return "F";
    case Net::Dx: return "Dx";
    case Net::Dy: return "Dy";
    case Net::Source: return "source";
    case Net::Target: return "target";
  }
  return "?";
}

torch::nn::Module& net_module(ModelBundle& b, Net n) {
  switch (n) {
    case Net::G: return *b.G;
    case Net::F: return *b.F;
    case Net::Dx: return *b.Dx;
    case Net::Dy: return *b.Dy;
    case Net::Source: return *b.source;
    case Net::Target: return *b.target;
  }
  throw Error(ErrorCode::InvalidValue, "unknown network");
}

CheckpointData export_bundle(ModelBundle& bundle, const std::vector<Net>& nets, const ExperimentConfig& cfg,
                             const std::string& phase) {
  CheckpointData data;
  data.num_classes = static_cast<std::uint32_t>(cfg.num_classes);
  data.header["config"] = serialize_config(cfg);
  data.header["phase"] = phase;
  auto names = nlohmann::json::array();
  for (const auto n : nets) {
    export_module(net_module(bundle, n), "net." + net_name(n) + ".", data);
    names.push_back(net_name(n));
  }
  data.header["networks"] = names;
  return data;
}

std::vector<Net> import_bundle(ModelBundle& bundle, const CheckpointData& data) {
  std::vector<Net> loaded;
  for (const auto n : kAllNets) {
    const auto prefix = "net." + net_name(n) + ".";
    if (!has_prefix(data, prefix)) continue;
    import_module(net_module(bundle, n), prefix, data);
    loaded.push_back(n);
  }
  return loaded;
}

std::string source_digest(ModelBundle& bundle) { return module_digest(*bundle.source); }

}  // namespace ttl
