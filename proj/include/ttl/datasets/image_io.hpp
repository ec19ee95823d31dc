#pragma once

#include <filesystem>

#include <torch/torch.h>

namespace ttl {

/// Reads an 8-bit PNG (gray, gray+alpha, RGB or RGBA) into a float C x H x W
/// tensor in [-1, 1]. Gray images are replicated to `channels` channels.
torch::Tensor read_png(const std::filesystem::path& path, int channels = 3);

/// Writes a C x H x W tensor in [-1, 1] (C = 1 or 3) as an 8-bit PNG.
void write_png(const std::filesystem::path& path, const torch::Tensor& chw);

}  // namespace ttl
