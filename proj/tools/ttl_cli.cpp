// ttl: command-line driver for data generation, training phases, evaluation
// and translation grids.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ttl/core/checkpoint.hpp"
#include "ttl/core/config.hpp"
#include "ttl/core/error.hpp"
#include "ttl/core/report.hpp"
#include "ttl/core/rng.hpp"
#include "ttl/datasets/image_io.hpp"
#include "ttl/datasets/manifest.hpp"
#include "ttl/datasets/pipeline.hpp"
#include "ttl/datasets/synthetic.hpp"
#include "ttl/metrics/evaluate.hpp"
#include "ttl/metrics/features.hpp"
#include "ttl/metrics/fid.hpp"
#include "ttl/metrics/reports.hpp"
#include "ttl/models/bundle.hpp"
#include "ttl/trainer/phases.hpp"
#include "ttl/trainer/state.hpp"

#ifndef TTL_CODE_DIGEST
#define TTL_CODE_DIGEST "unknown"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInvalid = 2, kIo = 3, kMissingCheckpoint = 4, kDiverged = 5 };

int exit_code_for(ttl::ErrorCode code) {
  using ttl::ErrorCode;
  switch (code) {
    case ErrorCode::IoFailure:
      return kIo;
    case ErrorCode::MissingCheckpoint:
    case ErrorCode::CorruptCheckpoint:
    case ErrorCode::VersionMismatch:
      return kMissingCheckpoint;
    case ErrorCode::Diverged:
    case ErrorCode::NonFiniteGradient:
      return kDiverged;
    case ErrorCode::MalformedConfig:
    case ErrorCode::InvalidValue:
    case ErrorCode::InvalidSpec:
    case ErrorCode::FractionOutOfRange:
    case ErrorCode::UnknownExtractor:
    case ErrorCode::MissingDistance:
    case ErrorCode::NonpositiveDistance:
    case ErrorCode::EmptyClass:
    case ErrorCode::LabelLeak:
    case ErrorCode::DataEmpty:
      return kInvalid;
    default:
      return kFailure;
  }
}

std::string utc_stamp(const char* fmt) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, fmt);
  return os.str();
}

struct CommonFlags {
  std::string config;
  std::vector<std::string> overrides;  // key=value
  std::string data;
  std::string checkpoint;
  std::string out = "runs";
  std::string run_dir;
  std::optional<std::uint64_t> seed;
  bool smoke = false;
};

/// Per-invocation state: resolved config, run directory, manifest.
struct Run {
  std::string command;
  std::vector<std::string> argv;
  ttl::ExperimentConfig cfg;
  json provenance = json::object();  // key -> "flag" | "config" | "checkpoint"
  fs::path dir;
  std::string started;
  json artifacts = json::object();
  std::unique_ptr<ttl::JsonLinesWriter> metrics;

  fs::path path(const std::string& name) {
    artifacts[name] = (dir / name).string();
    return dir / name;
  }
};

void apply_text_layer(ttl::ExperimentConfig& cfg, const std::string& text, const std::string& origin, json& prov) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  // Parse the whole layer once for syntax and range errors, then re-apply
  // key by key on top of the running config.
  (void)ttl::parse_config(text);
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const auto key = trim(line.substr(0, eq));
    ttl::apply_config_value(cfg, key, trim(line.substr(eq + 1)));
    prov[key] = origin;
  }
}

void apply_smoke(ttl::ExperimentConfig& cfg) {
  cfg.schedule.pretrain_epochs = std::min(cfg.schedule.pretrain_epochs, 2);
  cfg.schedule.ttl_epochs = std::min(cfg.schedule.ttl_epochs, 2);
  cfg.schedule.lr_decay_epoch = std::min(cfg.schedule.lr_decay_epoch, 1);
  cfg.schedule.ce_warmup_epochs = std::min(cfg.schedule.ce_warmup_epochs, 1);
  cfg.schedule.finetune_epochs = std::min(cfg.schedule.finetune_epochs, 1);
  cfg.model.gen_filters = std::min(cfg.model.gen_filters, 8);
  cfg.model.gen_res_blocks = std::min(cfg.model.gen_res_blocks, 2);
  cfg.model.disc_filters = std::min(cfg.model.disc_filters, 8);
  cfg.model.cls_width = std::min(cfg.model.cls_width, 8);
  cfg.batch_size = std::min(cfg.batch_size, 16);
}

std::optional<ttl::CheckpointData> load_checkpoint_flag(const CommonFlags& f, bool required) {
  if (f.checkpoint.empty()) {
    if (required) throw ttl::Error(ttl::ErrorCode::MissingCheckpoint, "--checkpoint is required");
    return std::nullopt;
  }
  if (!fs::exists(f.checkpoint))
    throw ttl::Error(ttl::ErrorCode::MissingCheckpoint, "no checkpoint at " + f.checkpoint);
  return ttl::read_checkpoint(f.checkpoint);
}

Run start_run(const std::string& command, const CommonFlags& f, const std::vector<std::string>& argv,
              const ttl::CheckpointData* ckpt) {
  Run run;
  run.command = command;
  run.argv = argv;
  run.started = utc_stamp("%Y-%m-%dT%H:%M:%SZ");
  if (ckpt && ckpt->header.contains("config"))
    apply_text_layer(run.cfg, ckpt->header["config"].get<std::string>(), "checkpoint", run.provenance);
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ttl::Error(ttl::ErrorCode::IoFailure, "cannot read config " + f.config);
    std::stringstream ss;
    ss << in.rdbuf();
    apply_text_layer(run.cfg, ss.str(), "config", run.provenance);
  }
  if (!f.data.empty()) {
    run.cfg.data_dir = f.data;
    run.provenance["paths.data"] = "flag";
  }
  if (f.seed) {
    run.cfg.seed = *f.seed;
    run.provenance["run.seed"] = "flag";
  }
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ttl::Error(ttl::ErrorCode::InvalidValue, "--set expects key=value: " + kv);
    ttl::apply_config_value(run.cfg, kv.substr(0, eq), kv.substr(eq + 1));
    run.provenance[kv.substr(0, eq)] = "flag";
  }
  if (f.smoke) apply_smoke(run.cfg);
  run.cfg.validate();

  run.dir = f.run_dir.empty() ? fs::path(f.out) / (command + "-" + utc_stamp("%Y%m%d-%H%M%S")) : fs::path(f.run_dir);
  std::error_code ec;
  fs::create_directories(run.dir, ec);
  if (ec) throw ttl::Error(ttl::ErrorCode::IoFailure, "cannot create run directory " + run.dir.string());
  run.metrics = std::make_unique<ttl::JsonLinesWriter>(run.path("metrics.jsonl"));
  torch::set_num_threads(run.cfg.threads);
  ttl::seed_all(run.cfg.seed);
  return run;
}

void finish_run(Run& run, const json& summary, const std::vector<std::pair<std::string, std::string>>& csv) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [k, v] : csv) rows.push_back({k, v});
  ttl::write_csv(run.path("summary.csv"), {"metric", "value"}, rows);
  ttl::write_json(run.path("summary.json"), summary);
  json manifest{{"command", run.command},
                {"argv", run.argv},
                {"seed", run.cfg.seed},
                {"config", ttl::serialize_config(run.cfg)},
                {"config_sources", run.provenance},
                {"started", run.started},
                {"finished", utc_stamp("%Y-%m-%dT%H:%M:%SZ")},
                {"code_digest", TTL_CODE_DIGEST},
                {"artifacts", run.artifacts}};
  ttl::write_json(run.dir / "manifest.json", manifest);
  std::cout << "run directory: " << run.dir.string() << "\n";
}

ttl::PreparedData load_data(const ttl::ExperimentConfig& cfg, bool smoke) {
  const auto manifest = cfg.data_dir / "manifest.csv";
  if (!fs::exists(manifest)) throw ttl::Error(ttl::ErrorCode::IoFailure, "no manifest at " + manifest.string());
  const auto chips = ttl::load_chips(manifest, cfg.channels);
  ttl::ChipSet source, target;
  for (const auto& c : chips) (c.domain == ttl::Domain::Source ? source : target).push_back(c);
  if (smoke) {
    // Keep the first few chips of every class.
    const auto thin = [&](const ttl::ChipSet& in) {
      std::vector<int> seen(cfg.num_classes, 0);
      ttl::ChipSet out;
      for (const auto& c : in)
        if (c.label && *c.label < cfg.num_classes && seen[*c.label]++ < 8) out.push_back(c);
      return out;
    };
    source = thin(source);
    target = thin(target);
  }
  return ttl::prepare_domains(cfg, source, target);
}

std::string pct(double a) { return ttl::format_real(100.0 * a, 4); }

ttl::RunControl control_for(Run& run, bool smoke) {
  ttl::RunControl c;
  c.metrics = run.metrics.get();
  c.max_batches_per_epoch = smoke ? 2 : 0;
  return c;
}

void write_eval_reports(Run& run, const std::string& tag, const ttl::EvalResult& r) {
  ttl::write_confusion_csv(run.path("confusion_" + tag + ".csv"), r.confusion);
  ttl::write_confusion_png(run.path("confusion_" + tag + ".png"), r.confusion);
}

// ---------------------------------------------------------------------------

int cmd_make_data(const std::string& spec_path, const std::string& out, std::optional<std::uint64_t> seed) {
  ttl::SyntheticSpec spec;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw ttl::Error(ttl::ErrorCode::IoFailure, "cannot read spec " + spec_path);
    std::stringstream ss;
    ss << in.rdbuf();
    spec = ttl::parse_synthetic_spec(ss.str());
  }
  if (seed) spec.seed = *seed;
  spec.validate();
  const auto domains = ttl::make_synthetic_domains(spec);
  auto all = domains.source;
  all.insert(all.end(), domains.target.begin(), domains.target.end());
  const auto records = ttl::write_dataset(out, all);
  std::ofstream spec_out(fs::path(out) / "spec.conf");
  spec_out << ttl::serialize_synthetic_spec(spec);
  if (!spec_out) throw ttl::Error(ttl::ErrorCode::IoFailure, "cannot write spec copy under " + out);
  std::cout << "wrote " << records.size() << " chips to " << out << "\n";
  return kOk;
}

int cmd_pretrain(const CommonFlags& f, const std::vector<std::string>& argv) {
  auto run = start_run("pretrain-source", f, argv, nullptr);
  const auto data = load_data(run.cfg, f.smoke);
  auto result = ttl::pretrain_source_classifier(run.cfg, data.source.train, data.source.val, control_for(run, f.smoke));

  ttl::ModelBundle bundle;
  bundle.source = result.classifier;
  auto ckpt = ttl::export_bundle(bundle, {ttl::Net::Source}, run.cfg, "pretrain");
  ckpt.header["pretrain"] = {{"best_epoch", result.best_epoch}, {"best_val_accuracy", result.best_val_accuracy}};
  ttl::write_checkpoint(run.path("source.ckpt"), ckpt);

  const auto src = ttl::evaluate_classifier(result.classifier, data.source.test, run.cfg.num_classes);
  const auto tgt = ttl::evaluate_classifier(result.classifier, data.target.test, run.cfg.num_classes);
  write_eval_reports(run, "source_test", src);
  write_eval_reports(run, "target_test_baseline", tgt);
  std::cout << "source test accuracy " << pct(src.accuracy) << "%, direct transfer to target "
            << pct(tgt.accuracy) << "%\n";
  finish_run(run,
             {{"source_test_accuracy", src.accuracy},
              {"target_test_baseline_accuracy", tgt.accuracy},
              {"best_epoch", result.best_epoch},
              {"best_val_accuracy", result.best_val_accuracy}},
             {{"source_test_accuracy_pct", pct(src.accuracy)},
              {"target_test_baseline_accuracy_pct", pct(tgt.accuracy)},
              {"best_epoch", std::to_string(result.best_epoch)}});
  return kOk;
}

ttl::ModelBundle bundle_from(const ttl::ExperimentConfig& cfg, const ttl::CheckpointData& ckpt) {
  auto bundle = ttl::make_bundle(cfg, ttl::RngStreams(cfg.seed));
  ttl::import_bundle(bundle, ckpt);
  return bundle;
}

int cmd_train_ttl(const CommonFlags& f, const std::vector<std::string>& argv, const std::string& resume) {
  const auto ckpt = load_checkpoint_flag(f, true);
  if (!ttl::has_prefix(*ckpt, "net.source."))
    throw ttl::Error(ttl::ErrorCode::MissingCheckpoint, f.checkpoint + " holds no source classifier");
  auto run = start_run("train-ttl", f, argv, &*ckpt);
  const auto data = load_data(run.cfg, f.smoke);
  auto bundle = bundle_from(run.cfg, *ckpt);
  {
    std::ofstream arch(run.path("architecture.txt"));
    arch << ttl::architecture_summary(bundle, run.cfg);
  }
  const auto baseline = ttl::evaluate_classifier(bundle.source, data.target.test, run.cfg.num_classes);

  ttl::TransductiveOptions opts;
  opts.control = control_for(run, f.smoke);
  opts.checkpoint_path = run.path("ttl_state.ckpt");
  if (!resume.empty()) {
    if (!fs::exists(resume)) throw ttl::Error(ttl::ErrorCode::MissingCheckpoint, "no checkpoint at " + resume);
    opts.resume_from = resume;
  }
  const auto target_train = ttl::strip_labels(data.target.train);
  const auto result = ttl::train_transductive(run.cfg, bundle, data.source.train, target_train, opts,
                                              &data.target.val);

  auto out = ttl::export_bundle(bundle, {ttl::Net::G, ttl::Net::F, ttl::Net::Dx, ttl::Net::Dy, ttl::Net::Source,
                                         ttl::Net::Target},
                                run.cfg, "transductive");
  out.header["selected_epoch"] = result.selected_epoch;
  ttl::write_checkpoint(run.path("ttl.ckpt"), out);

  const auto tgt = ttl::evaluate_classifier(bundle.target, data.target.test, run.cfg.num_classes);
  write_eval_reports(run, "target_test", tgt);
  write_eval_reports(run, "target_test_baseline", baseline);
  ttl::write_distance_csv(run.path("distance_target_test.csv"),
                          ttl::accuracy_by_distance(bundle.target, ttl::with_capture_distances(
                                                                       data.target.test, data.target.test_capture_m)));

  // Translated source test chips against real target test chips.
  auto extractor = ttl::make_extractor("classifier-penultimate", {bundle.source, ""});
  torch::Tensor translated;
  {
    torch::NoGradGuard ng;
    std::vector<torch::Tensor> xs;
    for (const auto& c : data.source.test) xs.push_back(c.pixels);
    translated = bundle.G->forward(torch::stack(xs));
  }
  std::vector<torch::Tensor> ys;
  for (const auto& c : data.target.test) ys.push_back(c.pixels);
  const auto fid = ttl::fid(ttl::extract_features(*extractor, translated),
                            ttl::extract_features(*extractor, torch::stack(ys)));

  std::cout << "target test accuracy " << pct(tgt.accuracy) << "% (direct transfer " << pct(baseline.accuracy)
            << "%), selected epoch " << result.selected_epoch << ", FID " << ttl::format_real(fid.value) << "\n";
  finish_run(run,
             {{"target_test_accuracy", tgt.accuracy},
              {"target_test_baseline_accuracy", baseline.accuracy},
              {"selected_epoch", result.selected_epoch},
              {"fid_translated_vs_target", fid.value},
              {"fid_extractor", extractor->name()}},
             {{"target_test_accuracy_pct", pct(tgt.accuracy)},
              {"target_test_baseline_accuracy_pct", pct(baseline.accuracy)},
              {"selected_epoch", std::to_string(result.selected_epoch)},
              {"fid_translated_vs_target", ttl::format_real(fid.value)}});
  return kOk;
}

int cmd_finetune(const CommonFlags& f, const std::vector<std::string>& argv, double fraction) {
  const auto ckpt = load_checkpoint_flag(f, true);
  if (!ttl::has_prefix(*ckpt, "net.target."))
    throw ttl::Error(ttl::ErrorCode::MissingCheckpoint, f.checkpoint + " holds no target classifier");
  auto run = start_run("finetune", f, argv, &*ckpt);
  const auto data = load_data(run.cfg, f.smoke);
  auto bundle = bundle_from(run.cfg, *ckpt);
  const auto zero = ttl::evaluate_classifier(bundle.target, data.target.test, run.cfg.num_classes);
  auto tuned = ttl::finetune_target(run.cfg, bundle.target, fraction, data.target.train, control_for(run, f.smoke));
  const auto r = ttl::evaluate_classifier(tuned, data.target.test, run.cfg.num_classes);
  write_eval_reports(run, "target_test", r);

  bundle.target = tuned;
  auto out = ttl::export_bundle(bundle, {ttl::Net::Source, ttl::Net::Target}, run.cfg, "finetune");
  out.header["fraction"] = fraction;
  ttl::write_checkpoint(run.path("finetuned.ckpt"), out);

  std::cout << "fraction=" << fraction << " target test accuracy " << pct(r.accuracy) << "% (zero-label "
            << pct(zero.accuracy) << "%)\n";
  finish_run(run, {{"fraction", fraction}, {"target_test_accuracy", r.accuracy}, {"zero_label_accuracy", zero.accuracy}},
             {{"fraction", ttl::format_real(fraction)},
              {"target_test_accuracy_pct", pct(r.accuracy)},
              {"zero_label_accuracy_pct", pct(zero.accuracy)}});
  return kOk;
}

int cmd_eval(const CommonFlags& f, const std::vector<std::string>& argv, const std::string& net,
             const std::string& domain, const std::string& split) {
  const auto ckpt = load_checkpoint_flag(f, true);
  const auto prefix = "net." + net + ".";
  if (!ttl::has_prefix(*ckpt, prefix))
    throw ttl::Error(ttl::ErrorCode::MissingCheckpoint, f.checkpoint + " holds no " + net + " classifier");
  auto run = start_run("eval", f, argv, &*ckpt);
  const auto data = load_data(run.cfg, f.smoke);
  auto bundle = bundle_from(run.cfg, *ckpt);
  const auto& d = domain == "source" ? data.source : data.target;
  const auto& chips = split == "train" ? d.train : split == "val" ? d.val : d.test;
  auto classifier = net == "source" ? bundle.source : bundle.target;
  const auto r = ttl::evaluate_classifier(classifier, chips, run.cfg.num_classes);
  const auto tag = net + "_on_" + domain + "_" + split;
  write_eval_reports(run, tag, r);
  if (split == "test")
    ttl::write_distance_csv(run.path("distance_" + tag + ".csv"),
                            ttl::accuracy_by_distance(classifier, ttl::with_capture_distances(d.test, d.test_capture_m)));
  std::cout << "accuracy " << pct(r.accuracy) << "% over " << chips.size() << " chips\n";
  finish_run(run, {{"network", net}, {"domain", domain}, {"split", split}, {"accuracy", r.accuracy}},
             {{"accuracy_pct", pct(r.accuracy)}, {"samples", std::to_string(chips.size())}});
  return kOk;
}

int cmd_generate(const CommonFlags& f, const std::vector<std::string>& argv, int count) {
  const auto ckpt = load_checkpoint_flag(f, true);
  if (!ttl::has_prefix(*ckpt, "net.G.") || !ttl::has_prefix(*ckpt, "net.F."))
    throw ttl::Error(ttl::ErrorCode::MissingCheckpoint, f.checkpoint + " holds no generators");
  auto run = start_run("generate", f, argv, &*ckpt);
  const auto data = load_data(run.cfg, f.smoke);
  auto bundle = bundle_from(run.cfg, *ckpt);
  torch::NoGradGuard ng;
  const auto n = std::min<std::size_t>({static_cast<std::size_t>(count), data.source.test.size(),
                                        data.target.test.size()});
  std::vector<std::vector<torch::Tensor>> rows;
  // Evenly spaced picks so the grid spans the classes.
  const auto pick = [n](const ttl::ChipSet& chips, std::size_t i) { return chips[i * chips.size() / n].pixels; };
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = pick(data.source.test, i).unsqueeze(0);
    const auto y = pick(data.target.test, i).unsqueeze(0);
    const auto gx = bundle.G->forward(x);
    const auto fy = bundle.F->forward(y);
    rows.push_back({x[0], gx[0], bundle.F->forward(gx)[0], y[0], fy[0], bundle.G->forward(fy)[0]});
  }
  if (!rows.empty()) ttl::write_png(run.path("translations.png"), ttl::image_grid(rows));
  std::cout << "wrote " << rows.size() << " sextuplets (x, G(x), F(G(x)), y, F(y), G(F(y)))\n";
  finish_run(run, {{"sextuplets", rows.size()}}, {{"sextuplets", std::to_string(rows.size())}});
  return kOk;
}

void add_common(CLI::App* sub, CommonFlags& f, bool needs_checkpoint) {
  sub->add_option("--config", f.config, "experiment config file");
  sub->add_option("--set", f.overrides, "config override key=value (repeatable)");
  sub->add_option("--data", f.data, "dataset directory holding manifest.csv");
  sub->add_option("--out", f.out, "parent directory for timestamped run directories");
  sub->add_option("--run-dir", f.run_dir, "exact run directory (overrides --out)");
  sub->add_option("--seed", f.seed, "experiment seed");
  sub->add_flag("--smoke", f.smoke, "tiny networks, 2 epochs, 2 batches per epoch");
  if (needs_checkpoint) sub->add_option("--checkpoint", f.checkpoint, "input checkpoint");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transductive CycleGAN transfer learning toolkit"};
  app.require_subcommand(1);
  const std::vector<std::string> args(argv, argv + argc);

  std::string spec_path, data_out = "data";
  std::optional<std::uint64_t> data_seed;
  auto* make_data = app.add_subcommand("make-data", "render the synthetic two-domain benchmark");
  make_data->add_option("--spec", spec_path, "synthetic spec file (defaults if omitted)");
  make_data->add_option("--out", data_out, "output directory");
  make_data->add_option("--seed", data_seed, "rendering seed");

  CommonFlags pre_f, ttl_f, ft_f, eval_f, gen_f;
  auto* pretrain = app.add_subcommand("pretrain-source", "train the source classifier");
  add_common(pretrain, pre_f, false);

  std::string resume;
  auto* train = app.add_subcommand("train-ttl", "transductive training from a source checkpoint");
  add_common(train, ttl_f, true);
  train->add_option("--resume", resume, "continue from a ttl_state.ckpt");

  double fraction = 0.0;
  auto* finetune = app.add_subcommand("finetune", "fine-tune the target classifier on a labeled fraction");
  add_common(finetune, ft_f, true);
  finetune->add_option("--fraction", fraction, "labeled fraction in (0, 1]")->required();

  std::string net = "target", domain = "target", split = "test";
  auto* eval = app.add_subcommand("eval", "accuracy, confusion matrix and distance table");
  add_common(eval, eval_f, true);
  eval->add_option("--net", net, "classifier to evaluate")->check(CLI::IsMember({"source", "target"}));
  eval->add_option("--domain", domain, "data domain")->check(CLI::IsMember({"source", "target"}));
  eval->add_option("--split", split, "data split")->check(CLI::IsMember({"train", "val", "test"}));

  int count = 8;
  auto* generate = app.add_subcommand("generate", "translation sextuplet grid");
  add_common(generate, gen_f, true);
  generate->add_option("--count", count, "number of sextuplets")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*make_data) return cmd_make_data(spec_path, data_out, data_seed);
    if (*pretrain) return cmd_pretrain(pre_f, args);
    if (*train) return cmd_train_ttl(ttl_f, args, resume);
    if (*finetune) return cmd_finetune(ft_f, args, fraction);
    if (*eval) return cmd_eval(eval_f, args, net, domain, split);
    if (*generate) return cmd_generate(gen_f, args, count);
  } catch (const ttl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: INTERNAL: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
