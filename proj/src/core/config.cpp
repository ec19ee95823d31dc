#include "ttl/core/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "ttl/core/error.hpp"
#include "ttl/core/report.hpp"

namespace ttl {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidValue, key + ": expected a real number, got '" + v + "'");
  }
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw Error(ErrorCode::InvalidValue, key + ": expected an integer, got '" + v + "'");
  return out;
}

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

Field real_field(std::string key, double ExperimentConfig::*member) {
  return {key, [key, member](ExperimentConfig& c, const std::string& v) { c.*member = parse_real(key, v); },
          [member](const ExperimentConfig& c) { return format_exact(c.*member); }};
}

template <class Sub>
Field real_field(std::string key, Sub ExperimentConfig::*sub, double Sub::*member) {
  return {key,
          [key, sub, member](ExperimentConfig& c, const std::string& v) { (c.*sub).*member = parse_real(key, v); },
          [sub, member](const ExperimentConfig& c) { return format_exact((c.*sub).*member); }};
}

Field int_field(std::string key, int ExperimentConfig::*member) {
  return {key, [key, member](ExperimentConfig& c, const std::string& v) { c.*member = parse_int<int>(key, v); },
          [member](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

template <class Sub>
Field int_field(std::string key, Sub ExperimentConfig::*sub, int Sub::*member) {
  return {key,
          [key, sub, member](ExperimentConfig& c, const std::string& v) { (c.*sub).*member = parse_int<int>(key, v); },
          [sub, member](const ExperimentConfig& c) { return std::to_string((c.*sub).*member); }};
}

Field weight_field(std::string key, double LossWeights::*member) {
  return {key,
          [key, member](ExperimentConfig& c, const std::string& v) { c.loss.weights.*member = parse_real(key, v); },
          [member](const ExperimentConfig& c) { return format_exact(c.loss.weights.*member); }};
}

Field path_field(std::string key, std::filesystem::path ExperimentConfig::*member) {
  return {key, [member](ExperimentConfig& c, const std::string& v) { c.*member = v; },
          [member](const ExperimentConfig& c) { return (c.*member).string(); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    using C = ExperimentConfig;
    std::vector<Field> f;
    f.push_back(int_field("data.num_classes", &C::num_classes));
    f.push_back(int_field("data.chip_size", &C::chip_size));
    f.push_back(int_field("data.channels", &C::channels));
    f.push_back(real_field("data.canonical_distance_m", &C::canonical_distance_m));
    f.push_back({"run.seed",
                 [](C& c, const std::string& v) { c.seed = parse_int<std::uint64_t>("run.seed", v); },
                 [](const C& c) { return std::to_string(c.seed); }});
    f.push_back(int_field("run.threads", &C::threads));
    f.push_back(int_field("train.batch_size", &C::batch_size));
    f.push_back(real_field("train.grad_clip_norm", &C::grad_clip_norm));
    f.push_back(real_field("optim.gan.lr", &C::gan_optim, &AdamSettings::lr));
    f.push_back(real_field("optim.gan.lr_decayed", &C::gan_lr_decayed));
    f.push_back(real_field("optim.gan.beta1", &C::gan_optim, &AdamSettings::beta1));
    f.push_back(real_field("optim.gan.beta2", &C::gan_optim, &AdamSettings::beta2));
    f.push_back(real_field("optim.classifier.lr", &C::cls_optim, &AdamSettings::lr));
    f.push_back(real_field("optim.classifier.beta1", &C::cls_optim, &AdamSettings::beta1));
    f.push_back(real_field("optim.classifier.beta2", &C::cls_optim, &AdamSettings::beta2));
    f.push_back(real_field("optim.finetune.lr", &C::finetune_lr));
    f.push_back(int_field("schedule.pretrain_epochs", &C::schedule, &ScheduleConfig::pretrain_epochs));
    f.push_back(int_field("schedule.ttl_epochs", &C::schedule, &ScheduleConfig::ttl_epochs));
    f.push_back(int_field("schedule.lr_decay_epoch", &C::schedule, &ScheduleConfig::lr_decay_epoch));
    f.push_back(int_field("schedule.ce_warmup_epochs", &C::schedule, &ScheduleConfig::ce_warmup_epochs));
    f.push_back(int_field("schedule.finetune_epochs", &C::schedule, &ScheduleConfig::finetune_epochs));
    f.push_back(int_field("schedule.discriminator_update_period", &C::schedule,
                          &ScheduleConfig::discriminator_update_period));
    f.push_back(weight_field("loss.eta1", &LossWeights::eta1));
    f.push_back(weight_field("loss.eta2", &LossWeights::eta2));
    f.push_back(weight_field("loss.eta3", &LossWeights::eta3));
    f.push_back(weight_field("loss.eta4", &LossWeights::eta4));
    f.push_back(weight_field("loss.lambda_a", &LossWeights::lambda_a));
    f.push_back(weight_field("loss.lambda_b", &LossWeights::lambda_b));
    f.push_back(weight_field("loss.lambda_c", &LossWeights::lambda_c));
    f.push_back(weight_field("loss.lambda_ce", &LossWeights::lambda_ce));
    f.push_back(real_field("loss.lambda_ce_warmup", &C::loss, &LossConfig::lambda_ce_warmup));
    f.push_back({"loss.adversarial",
                 [](C& c, const std::string& v) {
                   if (v == "logistic") c.loss.adversarial = AdversarialForm::Logistic;
                   else if (v == "least_squares") c.loss.adversarial = AdversarialForm::LeastSquares;
                   else throw Error(ErrorCode::InvalidValue, "loss.adversarial: expected logistic|least_squares");
                 },
                 [](const C& c) {
                   return std::string(c.loss.adversarial == AdversarialForm::Logistic ? "logistic" : "least_squares");
                 }});
    f.push_back(int_field("loss.pool_size", &C::loss, &LossConfig::pool_size));
    f.push_back(int_field("model.gen_filters", &C::model, &ModelConfig::gen_filters));
    f.push_back(int_field("model.gen_res_blocks", &C::model, &ModelConfig::gen_res_blocks));
    f.push_back(int_field("model.disc_filters", &C::model, &ModelConfig::disc_filters));
    f.push_back(int_field("model.disc_downsampling", &C::model, &ModelConfig::disc_downsampling));
    f.push_back(int_field("model.cls_width", &C::model, &ModelConfig::cls_width));
    f.push_back(path_field("paths.data", &C::data_dir));
    f.push_back(path_field("paths.checkpoints", &C::checkpoint_dir));
    f.push_back(path_field("paths.reports", &C::report_dir));
    return f;
  }();
  return table;
}

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidValue, std::string(key) + " " + what);
}

void validate_adam(const AdamSettings& a, const char* lr_key, const char* b1_key, const char* b2_key) {
  require(a.lr > 0, lr_key, "must be > 0");
  require(a.beta1 > 0 && a.beta1 < 1, b1_key, "must be in (0, 1)");
  require(a.beta2 > 0 && a.beta2 < 1, b2_key, "must be in (0, 1)");
}

}  // namespace

void ExperimentConfig::validate() const {
  require(num_classes > 0, "data.num_classes", "must be > 0");
  require(chip_size > 0, "data.chip_size", "must be > 0");
  require(channels > 0, "data.channels", "must be > 0");
  require(canonical_distance_m > 0, "data.canonical_distance_m", "must be > 0");
  require(threads >= 1, "run.threads", "must be >= 1");
  require(batch_size >= 1, "train.batch_size", "must be >= 1");
  require(grad_clip_norm >= 0, "train.grad_clip_norm", "must be >= 0");
  validate_adam(gan_optim, "optim.gan.lr", "optim.gan.beta1", "optim.gan.beta2");
  require(gan_lr_decayed > 0, "optim.gan.lr_decayed", "must be > 0");
  validate_adam(cls_optim, "optim.classifier.lr", "optim.classifier.beta1", "optim.classifier.beta2");
  require(finetune_lr > 0, "optim.finetune.lr", "must be > 0");
  require(schedule.pretrain_epochs >= 0, "schedule.pretrain_epochs", "must be >= 0");
  require(schedule.ttl_epochs >= 0, "schedule.ttl_epochs", "must be >= 0");
  require(schedule.lr_decay_epoch >= 0, "schedule.lr_decay_epoch", "must be >= 0");
  require(schedule.ce_warmup_epochs >= 0, "schedule.ce_warmup_epochs", "must be >= 0");
  require(schedule.finetune_epochs >= 0, "schedule.finetune_epochs", "must be >= 0");
  require(schedule.discriminator_update_period >= 1, "schedule.discriminator_update_period", "must be >= 1");
  loss.weights.validate();
  require(loss.lambda_ce_warmup >= 0, "loss.lambda_ce_warmup", "must be >= 0");
  require(loss.pool_size >= 0, "loss.pool_size", "must be >= 0");
  require(model.gen_filters > 0, "model.gen_filters", "must be > 0");
  require(model.gen_res_blocks >= 0, "model.gen_res_blocks", "must be >= 0");
  require(model.disc_filters > 0, "model.disc_filters", "must be > 0");
  require(model.disc_downsampling >= 1, "model.disc_downsampling", "must be >= 1");
  require(model.cls_width > 0, "model.cls_width", "must be > 0");
}

void apply_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(cfg, value);
      return;
    }
  }
  throw Error(ErrorCode::InvalidValue, "unknown key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::MalformedConfig, "line " + std::to_string(lineno) + ": expected 'key = value'");
    const auto key = trim(std::string_view(content).substr(0, eq));
    const auto value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty() || value.empty())
      throw Error(ErrorCode::MalformedConfig, "line " + std::to_string(lineno) + ": empty key or value");
    apply_config_value(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

}  // namespace ttl
