#include "ttl/trainer/schedule.hpp"

namespace ttl {

PhaseSchedule::PhaseSchedule(const ExperimentConfig& cfg)
    : gan_lr_(cfg.gan_optim.lr),
      gan_lr_decayed_(cfg.gan_lr_decayed),
      cls_lr_(cfg.cls_optim.lr),
      lambda_warmup_(cfg.loss.lambda_ce_warmup),
      lambda_full_(cfg.loss.weights.lambda_ce),
      lr_decay_epoch_(cfg.schedule.lr_decay_epoch),
      ce_warmup_epochs_(cfg.schedule.ce_warmup_epochs),
      ttl_epochs_(cfg.schedule.ttl_epochs),
      period_(cfg.schedule.discriminator_update_period) {}

double PhaseSchedule::gan_lr(int epoch) const { return epoch <= lr_decay_epoch_ ? gan_lr_ : gan_lr_decayed_; }

double PhaseSchedule::lambda_ce(int epoch) const { return epoch <= ce_warmup_epochs_ ? lambda_warmup_ : lambda_full_; }

bool PhaseSchedule::discriminator_step(std::int64_t global_step) const { return (global_step + 1) % period_ == 0; }

int PhaseSchedule::final_regime_start() const {
  if (ttl_epochs_ <= ce_warmup_epochs_ || lambda_warmup_ == lambda_full_) return 1;
  return ce_warmup_epochs_ + 1;
}

}  // namespace ttl
