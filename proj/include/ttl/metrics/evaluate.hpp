#pragma once

#include <functional>
#include <vector>

#include "ttl/core/types.hpp"
#include "ttl/metrics/confusion.hpp"
#include "ttl/models/classifier.hpp"

namespace ttl {

/// Maps a B x C x H x W batch to B x K logits.
using Predictor = std::function<torch::Tensor(const torch::Tensor&)>;

/// Eval-mode, no-grad predictor over a classifier. The classifier's
/// train/eval mode is restored after each call.
Predictor make_predictor(ClassifierNet net);

std::vector<int> predict_labels(const Predictor& predictor, const ChipSet& chips, int batch_size = 256);

struct EvalResult {
  double accuracy = 0.0;
  ConfusionMatrix confusion;
};

/// Throws DataEmpty for an empty set and InvalidValue for unlabeled chips.
EvalResult evaluate_classifier(const Predictor& predictor, const ChipSet& chips, int num_classes);
EvalResult evaluate_classifier(ClassifierNet net, const ChipSet& chips, int num_classes);

struct DistanceRow {
  double distance_m = 0.0;
  double accuracy = 0.0;
  std::int64_t samples = 0;
};

struct DistanceAccuracyTable {
  std::vector<DistanceRow> rows;  // ascending distance
};

/// Throws MissingDistance if a chip has no capture distance.
DistanceAccuracyTable accuracy_by_distance(const Predictor& predictor, const ChipSet& chips);
DistanceAccuracyTable accuracy_by_distance(ClassifierNet net, const ChipSet& chips);

}  // namespace ttl
