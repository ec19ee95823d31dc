#include "ttl/metrics/evaluate.hpp"

#include <map>

#include "ttl/core/error.hpp"
#include "ttl/datasets/batches.hpp"

namespace ttl {

Predictor make_predictor(ClassifierNet net) {
  return [net](const torch::Tensor& images) mutable {
    torch::NoGradGuard no_grad;
    const bool was_training = net->is_training();
    net->eval();
    const auto dtype = net->parameters().front().scalar_type();
    auto logits = net->forward(images.to(dtype));
    if (was_training) net->train();
    return logits;
  };
}

std::vector<int> predict_labels(const Predictor& predictor, const ChipSet& chips, int batch_size) {
  std::vector<int> out;
  out.reserve(chips.size());
  auto stream = iterate_batches(chips, batch_size, /*shuffle=*/false, 0);
  while (auto batch = stream.next()) {
    const auto pred = predictor(batch->images).argmax(1).to(torch::kInt64).contiguous();
    const auto* p = pred.data_ptr<std::int64_t>();
    for (std::int64_t i = 0; i < pred.numel(); ++i) out.push_back(static_cast<int>(p[i]));
  }
  return out;
}

EvalResult evaluate_classifier(const Predictor& predictor, const ChipSet& chips, int num_classes) {
  if (chips.empty()) throw Error(ErrorCode::DataEmpty, "no chips to evaluate");
  std::vector<int> truth;
  truth.reserve(chips.size());
  for (const auto& c : chips) {
    if (!c.label) throw Error(ErrorCode::InvalidValue, "evaluation requires labeled chips");
    truth.push_back(*c.label);
  }
  const auto predicted = predict_labels(predictor, chips);
  EvalResult r;
  r.confusion = confusion_matrix(truth, predicted, num_classes);
  r.accuracy = r.confusion.accuracy();
  return r;
}

EvalResult evaluate_classifier(ClassifierNet net, const ChipSet& chips, int num_classes) {
  return evaluate_classifier(make_predictor(net), chips, num_classes);
}

DistanceAccuracyTable accuracy_by_distance(const Predictor& predictor, const ChipSet& chips) {
  for (const auto& c : chips) {
    if (!c.capture_distance_m) throw Error(ErrorCode::MissingDistance, "chip without capture distance");
    if (!c.label) throw Error(ErrorCode::InvalidValue, "evaluation requires labeled chips");
  }
  const auto predicted = predict_labels(predictor, chips);
  std::map<double, std::pair<std::int64_t, std::int64_t>> tally;  // distance -> (correct, total)
  for (std::size_t i = 0; i < chips.size(); ++i) {
    auto& [correct, total] = tally[*chips[i].capture_distance_m];
    ++total;
    if (predicted[i] == *chips[i].label) ++correct;
  }
  DistanceAccuracyTable table;
  for (const auto& [d, ct] : tally)
    table.rows.push_back({d, static_cast<double>(ct.first) / static_cast<double>(ct.second), ct.second});
  return table;
}

DistanceAccuracyTable accuracy_by_distance(ClassifierNet net, const ChipSet& chips) {
  return accuracy_by_distance(make_predictor(net), chips);
}

}  // namespace ttl
