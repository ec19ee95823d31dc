#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "ttl/core/error.hpp"
#include "ttl/core/rng.hpp"
#include "ttl/trainer/phases.hpp"

namespace ttl {

ChipSet labeled_subsample(const ChipSet& chips, double fraction, int num_classes, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw Error(ErrorCode::FractionOutOfRange, "fraction must be in (0, 1]");
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < chips.size(); ++i) {
    if (!chips[i].label) throw Error(ErrorCode::InvalidValue, "fine-tuning needs labeled target chips");
    by_class.at(*chips[i].label).push_back(i);
  }
  const RngStreams streams(seed);
  std::vector<std::size_t> picked;
  for (int c = 0; c < num_classes; ++c) {
    auto& idx = by_class[c];
    if (idx.empty()) continue;
    auto eng = streams.engine("finetune/subsample", static_cast<std::uint64_t>(c));
    std::shuffle(idx.begin(), idx.end(), eng);
    const auto take = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * idx.size())));
    picked.insert(picked.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(std::min(take, idx.size())));
  }
  std::sort(picked.begin(), picked.end());
  ChipSet out;
  out.reserve(picked.size());
  for (const auto i : picked) out.push_back(chips[i]);
  return out;
}

ClassifierNet finetune_target(const ExperimentConfig& cfg, const ClassifierNet& target, double fraction,
                              const ChipSet& target_train, const RunControl& control) {
  const auto subset = labeled_subsample(target_train, fraction, cfg.num_classes, RngStreams(cfg.seed).derive("finetune"));
  if (subset.empty()) throw Error(ErrorCode::DataEmpty, "no labeled target chips selected");

  auto net = clone_classifier(target);
  net->set_trainable(true);
  Adam opt(net->parameters(), cfg.cls_optim.beta1, cfg.cls_optim.beta2);
  const auto order_seed = RngStreams(cfg.seed).derive("finetune/order");
  for (int epoch = 1; epoch <= cfg.schedule.finetune_epochs; ++epoch) {
    const auto stats = detail::train_classifier_epoch(net, opt, subset, cfg.batch_size, order_seed, epoch,
                                                      cfg.finetune_lr, cfg.grad_clip_norm,
                                                      control.max_batches_per_epoch);
    if (control.metrics)
      control.metrics->write({{"phase", "finetune"},
                              {"fraction", fraction},
                              {"epoch", epoch},
                              {"labeled_chips", subset.size()},
                              {"train_loss", stats.mean_loss},
                              {"train_accuracy", stats.train_accuracy}});
  }
  net->eval();
  return net;
}

}  // namespace ttl
