#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "ttl/core/config.hpp"
#include "ttl/core/report.hpp"
#include "ttl/core/rng.hpp"
#include "ttl/core/types.hpp"
#include "ttl/losses/losses.hpp"
#include "ttl/models/bundle.hpp"

namespace ttl {

/// Knobs shared by all phases that are not part of the experiment record.
struct RunControl {
  JsonLinesWriter* metrics = nullptr;  // per-epoch JSON lines, optional
  int max_batches_per_epoch = 0;       // 0 = full epochs; smoke runs cap this
};

// ---------------------------------------------------------------------------
// Source classifier pretraining

struct PretrainResult {
  ClassifierNet classifier{nullptr};  // frozen, eval mode
  double best_val_accuracy = 0.0;
  int best_epoch = 0;
  std::vector<nlohmann::json> epochs;
};

/// Trains a classifier on labeled source chips for schedule.pretrain_epochs
/// with the classifier Adam settings and returns the best-validation
/// snapshot (last epoch when `val` is empty). Throws DataEmpty.
PretrainResult pretrain_source_classifier(const ExperimentConfig& cfg, const ChipSet& train, const ChipSet& val,
                                          const RunControl& control = {});

// ---------------------------------------------------------------------------
// Transductive training

struct TransductiveEpoch {
  int epoch = 0;
  double gan_lr = 0.0;
  double classifier_lr = 0.0;
  double lambda_ce = 0.0;
  std::int64_t steps = 0;
  std::int64_t discriminator_updates = 0;  // cumulative
  LossBreakdown mean;                      // generator-side terms averaged over the epoch
  double mean_adv_Dx = 0.0, mean_adv_Dy = 0.0;
  std::optional<double> target_accuracy;   // reporting only
  std::string source_digest;

  nlohmann::json to_json() const;
};

struct TransductiveOptions {
  RunControl control;
  std::filesystem::path checkpoint_path;  // written after every epoch when set
  std::filesystem::path resume_from;      // continue from this checkpoint when set
  int stop_after_epoch = 0;               // > 0: return after this epoch (for resume tests)
  /// Called after each epoch with the live bundle.
  std::function<void(const TransductiveEpoch&, ModelBundle&)> on_epoch;
};

struct TransductiveResult {
  std::vector<TransductiveEpoch> epochs;
  int selected_epoch = 0;
  double selected_total = 0.0;
};

/// Runs the transductive phase. `bundle.source` must hold the trained source
/// classifier; it is frozen here and the target classifier is initialized
/// from it (unless resuming). `target_train` must carry no labels (LabelLeak
/// otherwise). `target_eval`, when given, is used only for reported accuracy.
///
/// Per step: one joint update of G, F and the target classifier on the
/// generator objective with the discriminators fixed; every
/// discriminator_update_period-th step also one update of D_x and D_y from
/// the image pools. The returned bundle carries the target classifier of the
/// epoch with the lowest mean training total among epochs sharing the final
/// lambda_ce. Throws FrozenViolation if the source parameters change and
/// Diverged on a non-finite loss.
TransductiveResult train_transductive(const ExperimentConfig& cfg, ModelBundle& bundle, const ChipSet& source_train,
                                      const ChipSet& target_train, const TransductiveOptions& options = {},
                                      const ChipSet* target_eval = nullptr);

// ---------------------------------------------------------------------------
// Fractional-label fine-tuning

/// Stratified subsample: per class max(1, round(fraction * n_c)) chips.
ChipSet labeled_subsample(const ChipSet& chips, double fraction, int num_classes, std::uint64_t seed);

/// Fine-tunes a copy of `target` for schedule.finetune_epochs on a labeled
/// `fraction` of `target_train`. Throws FractionOutOfRange unless
/// 0 < fraction <= 1.
ClassifierNet finetune_target(const ExperimentConfig& cfg, const ClassifierNet& target, double fraction,
                              const ChipSet& target_train, const RunControl& control = {});

}  // namespace ttl
