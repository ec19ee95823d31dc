#include "ttl/core/types.hpp"

#include <string>

#include "ttl/core/error.hpp"

namespace ttl {

std::string_view to_string(Domain d) { return d == Domain::Source ? "source" : "target"; }

Domain domain_from_string(std::string_view s) {
  if (s == "source") return Domain::Source;
  if (s == "target") return Domain::Target;
  throw Error(ErrorCode::InvalidValue, "unknown domain '" + std::string(s) + "'");
}

void validate_chip(const ImageChip& chip, int num_classes) {
  if (!chip.pixels.defined() || chip.pixels.dim() != 3)
    throw Error(ErrorCode::ShapeMismatch, "chip pixels must be C x H x W");
  const auto lo = chip.pixels.min().item<double>();
  const auto hi = chip.pixels.max().item<double>();
  if (!(lo >= -1.0 && hi <= 1.0))
    throw Error(ErrorCode::InvalidValue, "chip pixels outside [-1, 1]");
  if (chip.label && (*chip.label < 0 || *chip.label >= num_classes))
    throw Error(ErrorCode::InvalidValue, "chip label " + std::to_string(*chip.label) + " out of range");
  if (chip.capture_distance_m && !(*chip.capture_distance_m > 0.0))
    throw Error(ErrorCode::NonpositiveDistance, "capture distance must be positive");
}

void LossWeights::validate() const {
  const std::pair<const char*, double> all[] = {
      {"loss.eta1", eta1},         {"loss.eta2", eta2},         {"loss.eta3", eta3},
      {"loss.eta4", eta4},         {"loss.lambda_a", lambda_a}, {"loss.lambda_b", lambda_b},
      {"loss.lambda_c", lambda_c}, {"loss.lambda_ce", lambda_ce}};
  for (const auto& [name, v] : all)
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidValue, std::string(name) + " must be >= 0");
}

ChipSet strip_labels(const ChipSet& chips) {
  ChipSet out = chips;
  for (auto& c : out) c.label.reset();
  return out;
}

}  // namespace ttl
