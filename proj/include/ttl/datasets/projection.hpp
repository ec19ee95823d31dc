#pragma once

#include "ttl/core/types.hpp"

namespace ttl {

/// Pinhole-model rescale factor: apparent size is inversely proportional to
/// distance, so a chip captured at `capture_m` is resized by
/// capture_m / canonical_m to look as if taken at `canonical_m`.
double projection_scale(double capture_m, double canonical_m);

/// Rescales the chip with bicubic interpolation (antialiased when shrinking),
/// then center-crops or pads to chip_size x chip_size. Padding uses the
/// per-channel mean of the resized image border. The result carries
/// capture_distance_m = canonical_m. A scale of exactly 1 skips resampling,
/// which makes the operation idempotent.
ImageChip project_to_canonical(const ImageChip& chip, double canonical_m, int chip_size);

/// Center crop or border-mean pad of a C x H x W tensor to size x size.
torch::Tensor crop_or_pad(const torch::Tensor& chw, int size);

}  // namespace ttl
