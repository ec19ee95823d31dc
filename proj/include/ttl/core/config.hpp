#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ttl/core/types.hpp"

namespace ttl {

struct AdamSettings {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;

  bool operator==(const AdamSettings&) const = default;
};

enum class AdversarialForm { Logistic, LeastSquares };

struct ModelConfig {
  int gen_filters = 64;
  int gen_res_blocks = 6;
  int disc_filters = 64;
  int disc_downsampling = 3;
  int cls_width = 64;

  bool operator==(const ModelConfig&) const = default;
};

struct ScheduleConfig {
  int pretrain_epochs = 40;
  int ttl_epochs = 100;
  int lr_decay_epoch = 50;     // last epoch at the initial GAN learning rate
  int ce_warmup_epochs = 20;   // last epoch at lambda_ce_warmup
  int finetune_epochs = 10;
  int discriminator_update_period = 5;

  bool operator==(const ScheduleConfig&) const = default;
};

struct LossConfig {
  LossWeights weights;  // weights.lambda_ce is the post-warmup value
  double lambda_ce_warmup = 0.5;
  AdversarialForm adversarial = AdversarialForm::Logistic;
  int pool_size = 50;

  bool operator==(const LossConfig&) const = default;
};

struct ExperimentConfig {
  int num_classes = 10;
  int chip_size = 68;
  int channels = 3;
  double canonical_distance_m = 2000.0;
  std::uint64_t seed = 0;
  int batch_size = 160;
  int threads = 1;  // 1 = serial mode, the determinism reference
  double grad_clip_norm = 0.0;  // 0 disables global-norm clipping

  AdamSettings gan_optim{2e-4, 0.5, 0.999};
  double gan_lr_decayed = 1e-4;
  AdamSettings cls_optim{5e-4, 0.9, 0.999};
  double finetune_lr = 5e-4;  // classifier rate during fractional-label fine-tuning

  ScheduleConfig schedule;
  LossConfig loss{LossWeights{10, 10, 5, 5, 1, 1, 1, 2.5}, 0.5, AdversarialForm::Logistic, 50};
  ModelConfig model;

  std::filesystem::path data_dir = "data";
  std::filesystem::path checkpoint_dir = "checkpoints";
  std::filesystem::path report_dir = "reports";

  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses a flat `section.key = value` document. Omitted keys keep their
/// defaults. Throws MalformedConfig on syntax errors and InvalidValue
/// (naming the key) on out-of-range or unknown keys.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one `key=value` assignment on top of an existing config.
void apply_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace ttl
