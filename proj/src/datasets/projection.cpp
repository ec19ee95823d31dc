#include "ttl/datasets/projection.hpp"

#include <cmath>

#include "ttl/core/error.hpp"

namespace ttl {

namespace F = torch::nn::functional;

double projection_scale(double capture_m, double canonical_m) {
  if (!(capture_m > 0.0) || !(canonical_m > 0.0))
    throw Error(ErrorCode::NonpositiveDistance, "distances must be positive");
  return capture_m / canonical_m;
}

torch::Tensor crop_or_pad(const torch::Tensor& chw, int size) {
  auto img = chw;
  const auto h = img.size(1);
  const auto w = img.size(2);
  if (h > size) img = img.narrow(1, (h - size) / 2, size);
  if (w > size) img = img.narrow(2, (w - size) / 2, size);
  if (img.size(1) == size && img.size(2) == size) return img.contiguous();

  const auto ih = img.size(1);
  const auto iw = img.size(2);
  // Border mean, per channel.
  auto border = torch::cat({img.select(1, 0), img.select(1, ih - 1), img.select(2, 0), img.select(2, iw - 1)}, 1);
  auto fill = border.mean(1);
  auto out = fill.view({-1, 1, 1}).expand({img.size(0), size, size}).clone();
  const auto top = (size - ih) / 2;
  const auto left = (size - iw) / 2;
  out.narrow(1, top, ih).narrow(2, left, iw).copy_(img);
  return out;
}

ImageChip project_to_canonical(const ImageChip& chip, double canonical_m, int chip_size) {
  if (!chip.capture_distance_m) throw Error(ErrorCode::MissingDistance, "chip has no capture distance");
  const double s = projection_scale(*chip.capture_distance_m, canonical_m);

  ImageChip out = chip;
  out.capture_distance_m = canonical_m;
  if (s == 1.0) {
    out.pixels = crop_or_pad(chip.pixels, chip_size);
    return out;
  }
  const auto h = chip.pixels.size(1);
  const auto w = chip.pixels.size(2);
  const auto nh = std::max<std::int64_t>(1, std::llround(static_cast<double>(h) * s));
  const auto nw = std::max<std::int64_t>(1, std::llround(static_cast<double>(w) * s));
  auto resized = F::interpolate(chip.pixels.unsqueeze(0),
                                F::InterpolateFuncOptions()
                                    .size(std::vector<std::int64_t>{nh, nw})
                                    .mode(torch::kBicubic)
                                    .align_corners(false)
                                    .antialias(s < 1.0))
                     .squeeze(0)
                     .clamp(-1.0, 1.0);
  out.pixels = crop_or_pad(resized, chip_size);
  return out;
}

}  // namespace ttl
