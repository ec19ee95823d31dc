#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ttl/core/types.hpp"

namespace ttl {

enum class TextureFamily : std::uint8_t { Blobs, Stripes };

/// Rendering regime of one domain.
struct DomainStyle {
  double palette_mix = 0.0;  // 0 = thermal-like palette, 1 = visible-like palette
  double blur_sigma = 0.0;   // Gaussian blur std in pixels
  double noise_std = 0.0;    // additive Gaussian noise std
  TextureFamily texture = TextureFamily::Blobs;

  bool operator==(const DomainStyle&) const = default;
};

/// Desk-scale two-domain benchmark definition. Class c renders shape family
/// c % 5 with 2 * (c / 5) ornament dots, identically in both domains; only the
/// rendering style differs.
struct SyntheticSpec {
  int num_classes = 10;
  int samples_per_class = 200;  // per domain
  int chip_size = 68;
  int channels = 3;
  double canonical_distance_m = 2000.0;
  std::vector<double> distances_m{1500.0, 2000.0, 2500.0};
  DomainStyle source{0.0, 0.0, 0.03, TextureFamily::Blobs};
  DomainStyle target{1.0, 0.8, 0.06, TextureFamily::Stripes};
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticDomains {
  ChipSet source;
  ChipSet target;
};

/// Renders both domains. Poses, positions and distances are drawn
/// independently per domain so the two sets are unpaired. Deterministic in
/// (spec, seed).
SyntheticDomains make_synthetic_domains(const SyntheticSpec& spec);

/// Renders one chip of class `label` at `distance_m` with a given pose; used by
/// the generator and by tests that need controlled geometry.
struct Pose {
  double angle = 0.0;   // radians
  double dx = 0.0;      // center offset in pixels
  double dy = 0.0;
  double scale = 1.0;   // multiplicative size jitter
};
torch::Tensor render_chip(int label, const Pose& pose, double distance_m, const DomainStyle& style,
                          const SyntheticSpec& spec, std::uint64_t noise_seed);

/// Parses `synthetic.*` keys from a flat key-value document onto defaults.
SyntheticSpec parse_synthetic_spec(const std::string& text);
std::string serialize_synthetic_spec(const SyntheticSpec& spec);

}  // namespace ttl
