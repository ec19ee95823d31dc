#include "detail.hpp"
#include "ttl/core/error.hpp"
#include "ttl/metrics/evaluate.hpp"
#include "ttl/models/init.hpp"
#include "ttl/trainer/phases.hpp"

namespace ttl {

PretrainResult pretrain_source_classifier(const ExperimentConfig& cfg, const ChipSet& train, const ChipSet& val,
                                          const RunControl& control) {
  if (train.empty()) throw Error(ErrorCode::DataEmpty, "no source training records");
  const RngStreams streams(cfg.seed);

  ClassifierNet net(classifier_options(cfg));
  init_parameters(*net, streams.derive("net/source"));
  Adam opt(net->parameters(), cfg.cls_optim.beta1, cfg.cls_optim.beta2);

  PretrainResult result;
  result.best_val_accuracy = -1.0;
  ClassifierNet best = clone_classifier(net);
  for (int epoch = 1; epoch <= cfg.schedule.pretrain_epochs; ++epoch) {
    const auto stats = detail::train_classifier_epoch(net, opt, train, cfg.batch_size, streams.derive("pretrain/order"),
                                                      epoch, cfg.cls_optim.lr, cfg.grad_clip_norm,
                                                      control.max_batches_per_epoch);
    nlohmann::json rec{{"phase", "pretrain"},     {"epoch", epoch},
                       {"lr", cfg.cls_optim.lr},  {"train_loss", stats.mean_loss},
                       {"train_accuracy", stats.train_accuracy}};
    double score = static_cast<double>(epoch);  // no validation set: prefer the latest epoch
    if (!val.empty()) {
      score = evaluate_classifier(net, val, cfg.num_classes).accuracy;
      rec["val_accuracy"] = score;
    }
    if (score > result.best_val_accuracy) {
      result.best_val_accuracy = score;
      result.best_epoch = epoch;
      best = clone_classifier(net);
    }
    if (control.metrics) control.metrics->write(rec);
    result.epochs.push_back(std::move(rec));
  }
  if (val.empty()) result.best_val_accuracy = 0.0;
  result.classifier = best;
  result.classifier->eval();
  result.classifier->set_trainable(false);
  return result;
}

}  // namespace ttl
