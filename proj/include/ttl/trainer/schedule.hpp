#pragma once

#include <cstdint>

#include "ttl/core/config.hpp"

namespace ttl {

/// Piecewise-constant schedules of the transductive phase. Epochs are
/// 1-based; global steps are 0-based.
class PhaseSchedule {
 public:
  explicit PhaseSchedule(const ExperimentConfig& cfg);

  /// Initial rate through lr_decay_epoch, decayed rate afterwards.
  double gan_lr(int epoch) const;
  /// Warmup weight through ce_warmup_epochs, full weight afterwards.
  double lambda_ce(int epoch) const;
  /// True on every `period`-th generator step: steps period-1, 2*period-1, ...
  bool discriminator_step(std::int64_t global_step) const;

  double classifier_lr() const { return cls_lr_; }
  int ttl_epochs() const { return ttl_epochs_; }
  /// First epoch from which lambda_ce stays at its final value.
  int final_regime_start() const;

 private:
  double gan_lr_, gan_lr_decayed_, cls_lr_;
  double lambda_warmup_, lambda_full_;
  int lr_decay_epoch_, ce_warmup_epochs_, ttl_epochs_, period_;
};

}  // namespace ttl
