#pragma once

#include <filesystem>
#include <vector>

#include <torch/torch.h>

#include "ttl/metrics/confusion.hpp"
#include "ttl/metrics/evaluate.hpp"

namespace ttl {

/// Normalized matrix as CSV with a leading `true\pred` column.
void write_confusion_csv(const std::filesystem::path& path, const ConfusionMatrix& cm);

/// Grayscale-to-blue heatmap, `cell` pixels per matrix entry.
void write_confusion_png(const std::filesystem::path& path, const ConfusionMatrix& cm, int cell = 24);

/// Columns: distance_m, accuracy_pct, samples.
void write_distance_csv(const std::filesystem::path& path, const DistanceAccuracyTable& table);

/// Tiles equally sized C x H x W images into a grid (one row per entry of
/// `rows`), each tile separated by a 2-pixel border.
torch::Tensor image_grid(const std::vector<std::vector<torch::Tensor>>& rows);

}  // namespace ttl
