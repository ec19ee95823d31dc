#include <cmath>
#include <limits>

#include "ttl/core/checkpoint.hpp"
#include "ttl/core/error.hpp"
#include "ttl/core/rng.hpp"
#include "ttl/datasets/batches.hpp"
#include "ttl/metrics/evaluate.hpp"
#include "ttl/trainer/adam.hpp"
#include "ttl/trainer/image_pool.hpp"
#include "ttl/trainer/objective.hpp"
#include "ttl/trainer/phases.hpp"
#include "ttl/trainer/schedule.hpp"
#include "ttl/trainer/state.hpp"

namespace ttl {

nlohmann::json TransductiveEpoch::to_json() const {
  nlohmann::json j{{"phase", "transductive"},
                   {"epoch", epoch},
                   {"gan_lr", gan_lr},
                   {"classifier_lr", classifier_lr},
                   {"lambda_ce", lambda_ce},
                   {"steps", steps},
                   {"discriminator_updates", discriminator_updates},
                   {"loss", mean.to_json()},
                   {"source_digest", source_digest}};
  j["loss"]["adv_Dx"] = mean_adv_Dx;
  j["loss"]["adv_Dy"] = mean_adv_Dy;
  if (target_accuracy) j["target_accuracy"] = *target_accuracy;
  return j;
}

namespace {

void set_requires_grad(torch::nn::Module& m, bool on) {
  for (auto& p : m.parameters()) p.set_requires_grad(on);
}

std::vector<torch::Tensor> concat_params(torch::nn::Module& a, torch::nn::Module& b) {
  auto p = a.parameters();
  const auto q = b.parameters();
  p.insert(p.end(), q.begin(), q.end());
  return p;
}

TensorBatch target_batch(const ChipSet& chips, const std::vector<std::size_t>& order, std::size_t start,
                         std::size_t count) {
  std::vector<std::size_t> idx(count);
  for (std::size_t j = 0; j < count; ++j) idx[j] = order[(start + j) % order.size()];
  return make_batch(chips, idx);
}

struct Loop {
  Adam gen, cls, disc;
  ImagePool pool_x, pool_y;
  std::mt19937_64 pool_rng;
  int epoch = 0;
  std::int64_t global_step = 0;
  std::int64_t disc_updates = 0;
  double best_total = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  ClassifierNet best{nullptr};
  nlohmann::json history = nlohmann::json::array();
};

void save_state(const std::filesystem::path& path, ModelBundle& bundle, const ExperimentConfig& cfg, const Loop& s,
                const std::string& digest) {
  auto data = export_bundle(bundle, {Net::G, Net::F, Net::Dx, Net::Dy, Net::Source, Net::Target}, cfg,
                            "transductive");
  s.gen.export_state("opt.gen.", data);
  s.cls.export_state("opt.cls.", data);
  s.disc.export_state("opt.disc.", data);
  s.pool_x.export_state("pool.x.", data);
  s.pool_y.export_state("pool.y.", data);
  if (s.best) export_module(*s.best, "best.target.", data);
  data.header["transductive"] = {{"epoch", s.epoch},
                                 {"global_step", s.global_step},
                                 {"discriminator_updates", s.disc_updates},
                                 {"pool_rng", engine_state(s.pool_rng)},
                                 {"best_total", s.best_total},
                                 {"best_epoch", s.best_epoch},
                                 {"source_digest", digest},
                                 {"history", s.history}};
  write_checkpoint(path, data);
}

void load_state(const std::filesystem::path& path, ModelBundle& bundle, const ExperimentConfig& cfg, Loop& s,
                const std::string& digest) {
  const auto data = read_checkpoint(path, static_cast<std::uint32_t>(cfg.num_classes));
  if (!data.header.contains("transductive"))
    throw Error(ErrorCode::VersionMismatch, path.string() + " is not a transductive checkpoint");
  import_bundle(bundle, data);
  const auto& h = data.header["transductive"];
  if (h.at("source_digest").get<std::string>() != digest)
    throw Error(ErrorCode::FrozenViolation, "resumed checkpoint was trained against a different source classifier");
  s.gen.import_state("opt.gen.", data);
  s.cls.import_state("opt.cls.", data);
  s.disc.import_state("opt.disc.", data);
  s.pool_x.import_state("pool.x.", data);
  s.pool_y.import_state("pool.y.", data);
  s.epoch = h.at("epoch").get<int>();
  s.global_step = h.at("global_step").get<std::int64_t>();
  s.disc_updates = h.at("discriminator_updates").get<std::int64_t>();
  restore_engine_state(s.pool_rng, h.at("pool_rng").get<std::string>());
  s.best_total = h.at("best_total").is_null() ? std::numeric_limits<double>::infinity()
                                              : h.at("best_total").get<double>();
  s.best_epoch = h.at("best_epoch").get<int>();
  s.history = h.at("history");
  if (has_prefix(data, "best.target.")) {
    s.best = clone_classifier(bundle.target);
    import_module(*s.best, "best.target.", data);
  }
}

}  // namespace

TransductiveResult train_transductive(const ExperimentConfig& cfg, ModelBundle& bundle, const ChipSet& source_train,
                                      const ChipSet& target_train, const TransductiveOptions& options,
                                      const ChipSet* target_eval) {
  if (source_train.empty() || target_train.empty())
    throw Error(ErrorCode::DataEmpty, "transductive training needs source and target chips");
  for (const auto& c : target_train)
    if (c.label) throw Error(ErrorCode::LabelLeak, "target training chips must be unlabeled");
  for (const auto& c : source_train)
    if (!c.label) throw Error(ErrorCode::InvalidValue, "source training chips must be labeled");

  const RngStreams streams(cfg.seed);
  const PhaseSchedule schedule(cfg);
  const auto dtype = bundle.G->parameters().front().scalar_type();

  bundle.source->eval();
  bundle.source->set_trainable(false);
  const bool resuming = !options.resume_from.empty();
  if (!resuming) bundle.target = init_target_from_source(bundle.source);
  bundle.target->train();
  bundle.target->set_trainable(true);
  const auto digest = source_digest(bundle);

  Loop s{Adam(concat_params(*bundle.G, *bundle.F), cfg.gan_optim.beta1, cfg.gan_optim.beta2),
         Adam(bundle.target->parameters(), cfg.cls_optim.beta1, cfg.cls_optim.beta2),
         Adam(concat_params(*bundle.Dx, *bundle.Dy), cfg.gan_optim.beta1, cfg.gan_optim.beta2),
         ImagePool(cfg.loss.pool_size),
         ImagePool(cfg.loss.pool_size),
         streams.engine("ttl/pool")};
  if (resuming) load_state(options.resume_from, bundle, cfg, s, digest);

  TransductiveResult result;
  for (const auto& h : s.history) {
    TransductiveEpoch e;
    e.epoch = h.at("epoch").get<int>();
    e.gan_lr = h.at("gan_lr").get<double>();
    e.classifier_lr = h.at("classifier_lr").get<double>();
    e.lambda_ce = h.at("lambda_ce").get<double>();
    e.steps = h.at("steps").get<std::int64_t>();
    e.discriminator_updates = h.at("discriminator_updates").get<std::int64_t>();
    e.mean.total = h.at("loss").at("total").get<double>();
    e.mean.cycle = h.at("loss").at("cycle").get<double>();
    e.source_digest = h.at("source_digest").get<std::string>();
    if (h.contains("target_accuracy")) e.target_accuracy = h.at("target_accuracy").get<double>();
    result.epochs.push_back(e);
  }

  const auto source_seed = streams.derive("ttl/source-order");
  const auto target_seed = streams.derive("ttl/target-order");
  const auto selection_start = schedule.final_regime_start();

  for (int epoch = s.epoch + 1; epoch <= cfg.schedule.ttl_epochs; ++epoch) {
    TransductiveEpoch rec;
    rec.epoch = epoch;
    rec.gan_lr = schedule.gan_lr(epoch);
    rec.classifier_lr = schedule.classifier_lr();
    rec.lambda_ce = schedule.lambda_ce(epoch);
    LossWeights weights = cfg.loss.weights;
    weights.lambda_ce = rec.lambda_ce;

    const auto target_order = epoch_order(target_train.size(), true, target_seed, static_cast<std::uint64_t>(epoch));
    auto stream = iterate_batches(source_train, cfg.batch_size, true, source_seed, static_cast<std::uint64_t>(epoch));
    std::size_t target_cursor = 0;
    std::int64_t disc_steps = 0;
    while (auto xb = stream.next()) {
      if (options.control.max_batches_per_epoch > 0 && rec.steps >= options.control.max_batches_per_epoch) break;
      const auto bs = static_cast<std::size_t>(xb->size());
      const auto yb = target_batch(target_train, target_order, target_cursor, bs);
      target_cursor += bs;
      const auto x = xb->images.to(dtype);
      const auto y = yb.images.to(dtype);

      // Generators and target classifier, discriminators fixed.
      set_requires_grad(*bundle.Dx, false);
      set_requires_grad(*bundle.Dy, false);
      s.gen.zero_grad();
      s.cls.zero_grad();
      Translations t;
      TransductiveLoss loss;
      try {
        loss = generator_objective(bundle, x, *xb->labels, y, weights, cfg.loss.adversarial, &t);
        if (!std::isfinite(loss.breakdown.total)) throw Error(ErrorCode::NonFiniteInput, "total loss");
        loss.total.backward();
        s.gen.step(rec.gan_lr, cfg.grad_clip_norm);
        s.cls.step(rec.classifier_lr, cfg.grad_clip_norm);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonFiniteInput && e.code() != ErrorCode::NonFiniteGradient) throw;
        throw Error(ErrorCode::Diverged, "epoch " + std::to_string(epoch) + ": " + e.what());
      }
      set_requires_grad(*bundle.Dx, true);
      set_requires_grad(*bundle.Dy, true);

      if (schedule.discriminator_step(s.global_step)) {
        s.disc.zero_grad();
        const auto fake_x = s.pool_x.query(t.fake_x.detach(), s.pool_rng);
        const auto fake_y = s.pool_y.query(t.fake_y.detach(), s.pool_rng);
        DiscriminatorLoss d;
        try {
          d = discriminator_objective(bundle, x, y, fake_x, fake_y, cfg.loss.adversarial);
          d.total.backward();
          s.disc.step(rec.gan_lr, cfg.grad_clip_norm);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NonFiniteInput && e.code() != ErrorCode::NonFiniteGradient) throw;
          throw Error(ErrorCode::Diverged, "epoch " + std::to_string(epoch) + ": " + e.what());
        }
        ++s.disc_updates;
        ++disc_steps;
        rec.mean_adv_Dx += d.adv_Dx;
        rec.mean_adv_Dy += d.adv_Dy;
      }
      rec.mean += loss.breakdown;
      ++rec.steps;
      ++s.global_step;
    }
    if (rec.steps > 0) rec.mean = rec.mean.scaled(1.0 / static_cast<double>(rec.steps));
    if (disc_steps > 0) {
      rec.mean_adv_Dx /= static_cast<double>(disc_steps);
      rec.mean_adv_Dy /= static_cast<double>(disc_steps);
      rec.mean.adv_Dx = rec.mean_adv_Dx;
      rec.mean.adv_Dy = rec.mean_adv_Dy;
    }
    rec.discriminator_updates = s.disc_updates;

    rec.source_digest = source_digest(bundle);
    if (rec.source_digest != digest)
      throw Error(ErrorCode::FrozenViolation, "source classifier changed during epoch " + std::to_string(epoch));

    if (epoch >= selection_start && rec.mean.total < s.best_total) {
      s.best_total = rec.mean.total;
      s.best_epoch = epoch;
      s.best = clone_classifier(bundle.target);
    }
    if (target_eval) rec.target_accuracy = evaluate_classifier(bundle.target, *target_eval, cfg.num_classes).accuracy;

    s.epoch = epoch;
    s.history.push_back(rec.to_json());
    if (options.control.metrics) options.control.metrics->write(rec.to_json());
    result.epochs.push_back(rec);
    if (!options.checkpoint_path.empty()) save_state(options.checkpoint_path, bundle, cfg, s, digest);
    if (options.on_epoch) options.on_epoch(rec, bundle);
    if (options.stop_after_epoch > 0 && epoch >= options.stop_after_epoch) return result;
  }

  if (s.best) {
    torch::NoGradGuard no_grad;
    bundle.target = clone_classifier(s.best);
  }
  bundle.target->eval();
  result.selected_epoch = s.best_epoch;
  result.selected_total = s.best_total;
  return result;
}

}  // namespace ttl
