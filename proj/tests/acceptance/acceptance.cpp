// Acceptance suite: one PASS/FAIL line per criterion, with measured values
// and runtimes. Exit status is 0 only when every selected criterion passes.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <torch/torch.h>

#include "../support/fid_checks.hpp"
#include "../support/gradcheck.hpp"
#include "../support/loss_checks.hpp"
#include "../support/measure.hpp"
#include "../support/tiny.hpp"
#include "ttl/core/config.hpp"
#include "ttl/core/error.hpp"
#include "ttl/core/report.hpp"
#include "ttl/datasets/pipeline.hpp"
#include "ttl/datasets/projection.hpp"
#include "ttl/datasets/split.hpp"
#include "ttl/datasets/synthetic.hpp"
#include "ttl/metrics/confusion.hpp"
#include "ttl/metrics/evaluate.hpp"
#include "ttl/trainer/phases.hpp"
#include "ttl/trainer/state.hpp"

namespace fs = std::filesystem;
using ttl::format_real;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string pct(double a) { return format_real(100.0 * a, 4) + "%"; }

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ttl::Error(ttl::ErrorCode::IoFailure, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Options {
  fs::path out = "acceptance";
  std::vector<std::uint64_t> seeds{0, 1, 2};
  fs::path config = fs::path(TTL_SOURCE_DIR) / "configs" / "benchmark.conf";
  fs::path spec = fs::path(TTL_SOURCE_DIR) / "configs" / "benchmark_spec.conf";
};

// ---------------------------------------------------------------------------
// Benchmark state shared by the transfer and fine-tuning criteria.

struct SeedOutcome {
  std::uint64_t seed = 0;
  double source_test = 0, baseline = 0, target = 0;
  int selected_epoch = 0;
  double seconds = 0;
};

struct Benchmark {
  ttl::ExperimentConfig cfg;
  std::optional<ttl::SyntheticDomains> domains;
  std::map<std::uint64_t, SeedOutcome> outcomes;
  // Artifacts of the first seed, reused by fine-tuning.
  std::optional<ttl::PreparedData> data;
  ttl::ClassifierNet target{nullptr};
  std::uint64_t artifact_seed = 0;
};

void load_benchmark(Benchmark& b, const Options& opt) {
  if (b.domains) return;
  b.cfg = ttl::load_config(opt.config);
  b.domains = ttl::make_synthetic_domains(ttl::parse_synthetic_spec(read_text(opt.spec)));
}

SeedOutcome run_seed(Benchmark& b, const Options& opt, std::uint64_t seed) {
  const auto t0 = Clock::now();
  auto cfg = b.cfg;
  cfg.seed = seed;
  const auto dir = opt.out / "benchmark" / ("seed-" + std::to_string(seed));
  fs::create_directories(dir);
  std::ofstream(dir / "config.conf") << ttl::serialize_config(cfg);
  auto data = ttl::prepare_domains(cfg, b.domains->source, b.domains->target);

  ttl::JsonLinesWriter metrics(dir / "metrics.jsonl");
  ttl::RunControl control;
  control.metrics = &metrics;
  auto pre = ttl::pretrain_source_classifier(cfg, data.source.train, data.source.val, control);

  SeedOutcome o;
  o.seed = seed;
  o.source_test = ttl::evaluate_classifier(pre.classifier, data.source.test, cfg.num_classes).accuracy;
  o.baseline = ttl::evaluate_classifier(pre.classifier, data.target.test, cfg.num_classes).accuracy;
  std::cerr << "  seed " << seed << ": source test " << pct(o.source_test) << ", direct transfer "
            << pct(o.baseline) << " (" << format_real(seconds_since(t0), 3) << " s)\n";

  auto bundle = ttl::make_bundle(cfg, ttl::RngStreams(seed));
  bundle.source = pre.classifier;
  ttl::TransductiveOptions topts;
  topts.control = control;
  topts.on_epoch = [&](const ttl::TransductiveEpoch& e, ttl::ModelBundle&) {
    std::cerr << "  seed " << seed << " epoch " << e.epoch << ": total " << format_real(e.mean.total, 4)
              << ", target val " << (e.target_accuracy ? pct(*e.target_accuracy) : "-") << " ("
              << format_real(seconds_since(t0), 3) << " s)\n";
  };
  const auto result = ttl::train_transductive(cfg, bundle, data.source.train, ttl::strip_labels(data.target.train),
                                              topts, &data.target.val);
  o.target = ttl::evaluate_classifier(bundle.target, data.target.test, cfg.num_classes).accuracy;
  o.selected_epoch = result.selected_epoch;
  o.seconds = seconds_since(t0);
  ttl::write_json(dir / "result.json", {{"seed", seed},
                                        {"source_test_accuracy", o.source_test},
                                        {"target_test_baseline_accuracy", o.baseline},
                                        {"target_test_accuracy", o.target},
                                        {"selected_epoch", o.selected_epoch},
                                        {"seconds", o.seconds}});

  if (!b.target) {
    b.target = bundle.target;
    b.data = std::move(data);
    b.artifact_seed = seed;
  }
  b.outcomes[seed] = o;
  return o;
}

// ---------------------------------------------------------------------------
// Criteria

Verdict loss_oracles() {
  const auto o = loss_checks::run();
  Verdict v;
  v.pass = o.closed_form_failures.empty() && o.max_oracle_diff <= 1e-9;
  v.detail = std::to_string(5 - o.closed_form_failures.size()) + "/5 closed forms exact, max |loss - oracle| " +
             format_real(o.max_oracle_diff, 3) + " over " + std::to_string(o.oracle_cases) + " cases (tol 1e-9)";
  for (const auto& f : o.closed_form_failures) v.detail += "; mismatch: " + f;
  return v;
}

Verdict gradients() {
  const auto r = gradcheck::check_transductive_total(8, 0);
  Verdict v;
  v.pass = r.checked == 48 && r.max_rel_error < 1e-4;
  v.detail = "max relative error " + format_real(r.max_rel_error, 3) + " over " + std::to_string(r.checked) +
             " entries of G, F, D_x, D_y, target and x (tol 1e-4; " + std::to_string(r.kinks) +
             " kink entries redrawn)";
  return v;
}

Verdict fid_oracle() {
  const auto o = fid_checks::run();
  Verdict v;
  v.pass = std::fabs(o.identical) <= 1e-6 && std::fabs(o.displaced - 25.0) <= 1e-6 && o.max_oracle_diff <= 1e-6 &&
           o.max_asymmetry <= 1e-9;
  v.detail = "identical " + format_real(o.identical, 3) + ", displaced " + format_real(o.displaced, 12) +
             ", max |fid - closed form| " + format_real(o.max_oracle_diff, 3) + ", max asymmetry " +
             format_real(o.max_asymmetry, 3);
  return v;
}

Verdict frozen_and_no_leak() {
  const auto cfg = tiny::config(4);
  const auto d = tiny::domains(8, 4);
  const auto unlabeled = ttl::strip_labels(d.target);

  bool frozen = true;
  std::string before;
  const auto run = [&](const ttl::ChipSet* eval) {
    auto b = tiny::bundle(cfg);
    before = ttl::source_digest(b);
    std::vector<std::vector<std::string>> trace;
    ttl::TransductiveOptions opts;
    opts.on_epoch = [&](const ttl::TransductiveEpoch& e, ttl::ModelBundle& live) {
      frozen = frozen && e.source_digest == before && ttl::source_digest(live) == before;
      trace.push_back(tiny::digests(live));
    };
    ttl::train_transductive(cfg, b, d.source, unlabeled, opts, eval);
    frozen = frozen && ttl::source_digest(b) == before;
    return trace;
  };
  const auto withheld = run(nullptr);
  const auto supplied = run(&d.target);

  bool rejected = false;
  try {
    auto b = tiny::bundle(cfg);
    ttl::train_transductive(cfg, b, d.source, d.target);
  } catch (const ttl::Error& e) {
    rejected = e.code() == ttl::ErrorCode::LabelLeak;
  }

  Verdict v;
  const bool identical = withheld.size() == 5 && withheld == supplied;
  v.pass = frozen && identical && rejected;
  v.detail = std::string("source digest ") + (frozen ? "unchanged" : "CHANGED") + " over 5 epochs; trajectories " +
             (identical ? "bit-identical" : "DIFFER") + " with target labels withheld vs supplied; labeled " +
             "target training set " + (rejected ? "rejected" : "NOT rejected");
  return v;
}

Verdict schedule(const Options& opt) {
  auto cfg = tiny::config(5);
  const ttl::ExperimentConfig defaults;
  cfg.schedule = defaults.schedule;
  cfg.gan_optim = defaults.gan_optim;
  cfg.gan_lr_decayed = defaults.gan_lr_decayed;
  cfg.loss.lambda_ce_warmup = defaults.loss.lambda_ce_warmup;
  cfg.loss.weights.lambda_ce = defaults.loss.weights.lambda_ce;
  const auto d = tiny::domains(8, 5);
  auto b = tiny::bundle(cfg);

  const auto path = opt.out / "schedule" / "metrics.jsonl";
  fs::create_directories(path.parent_path());
  {
    ttl::JsonLinesWriter metrics(path);
    ttl::TransductiveOptions topts;
    topts.control.metrics = &metrics;
    topts.control.max_batches_per_epoch = 1;
    ttl::train_transductive(cfg, b, d.source, ttl::strip_labels(d.target), topts);
  }
  std::map<int, nlohmann::json> rec;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) {
    const auto j = nlohmann::json::parse(line);
    if (j.value("phase", "") == "transductive") rec[j.at("epoch").get<int>()] = j;
  }
  if (rec.size() != 100) return {false, "expected 100 recorded epochs, found " + std::to_string(rec.size())};
  std::int64_t steps = 0;
  for (const auto& [e, j] : rec) steps += j.at("steps").get<std::int64_t>();
  const auto at = [&](int e, const char* k) { return rec.at(e).at(k).get<double>(); };
  const auto updates = rec.at(100).at("discriminator_updates").get<std::int64_t>();
  Verdict v;
  v.pass = at(50, "gan_lr") == 2e-4 && at(51, "gan_lr") == 1e-4 && at(20, "lambda_ce") == 0.5 &&
           at(21, "lambda_ce") == 2.5 && steps == 100 && updates == 20;
  v.detail = "lr " + format_real(at(50, "gan_lr")) + " at epoch 50, " + format_real(at(51, "gan_lr")) +
             " at 51; lambda_ce " + format_real(at(20, "lambda_ce")) + " at 20, " + format_real(at(21, "lambda_ce")) +
             " at 21; " + std::to_string(updates) + " discriminator updates over " + std::to_string(steps) +
             " generator steps";
  return v;
}

Verdict transfer(Benchmark& b, const Options& opt) {
  load_benchmark(b, opt);
  bool pass = true;
  std::string detail;
  double total = 0;
  for (const auto seed : opt.seeds) {
    const auto o = b.outcomes.count(seed) ? b.outcomes.at(seed) : run_seed(b, opt, seed);
    total += o.seconds;
    const bool ok = o.source_test >= 0.95 && o.target - o.baseline >= 0.15 && o.target - 0.10 >= 0.40;
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += "seed " + std::to_string(seed) + " " + (ok ? "ok" : "FAIL") + ": source " + pct(o.source_test) +
              ", baseline " + pct(o.baseline) + ", transductive " + pct(o.target);
  }
  if (total > 3600) pass = false;
  return {pass, detail + " (need source >= 95%, transductive >= baseline + 15 and >= 50%)"};
}

Verdict finetune(Benchmark& b, const Options& opt) {
  load_benchmark(b, opt);
  if (!b.target) run_seed(b, opt, opt.seeds.empty() ? 0 : opt.seeds.front());
  auto cfg = b.cfg;
  cfg.seed = b.artifact_seed;
  const double zero = b.outcomes.at(b.artifact_seed).target;
  std::vector<double> acc;
  for (const double f : {0.01, 0.05, 0.10}) {
    auto net = ttl::finetune_target(cfg, b.target, f, b.data->target.train);
    acc.push_back(ttl::evaluate_classifier(net, b.data->target.test, cfg.num_classes).accuracy);
  }
  const bool ordered = acc[1] >= acc[0] - 0.01 && acc[2] >= acc[1] - 0.01 && acc[2] >= acc[0] - 0.01;
  Verdict v;
  v.pass = ordered && acc[0] > zero;
  v.detail = "seed " + std::to_string(b.artifact_seed) + ": zero-label " + pct(zero) + ", 1% " + pct(acc[0]) +
             ", 5% " + pct(acc[1]) + ", 10% " + pct(acc[2]) + " (nondecreasing within 1 point: " +
             (ordered ? "yes" : "NO") + ")";
  return v;
}

Verdict pipeline() {
  std::vector<std::string> fails;
  // Idempotence of the distance projection.
  torch::manual_seed(8);
  for (const double d : {1000.0, 1500.0, 2500.0, 3000.0, 5000.0}) {
    ttl::ImageChip c;
    c.pixels = torch::rand({3, 68, 68}) * 2 - 1;
    c.capture_distance_m = d;
    const auto once = ttl::project_to_canonical(c, 2000, 68);
    if (!torch::equal(once.pixels, ttl::project_to_canonical(once, 2000, 68).pixels))
      fails.push_back("projection not idempotent at " + format_real(d) + " m");
  }
  // Disk diameter tracks the capture distance.
  double worst_px = 0;
  const double canonical = measure::blob_diameter(measure::centered_disk(2000));
  for (const double d : {1000.0, 1500.0, 2500.0, 3000.0, 4000.0}) {
    ttl::ImageChip c;
    c.pixels = measure::centered_disk(d);
    c.capture_distance_m = d;
    const double before = measure::blob_diameter(c.pixels);
    const double after = measure::blob_diameter(ttl::project_to_canonical(c, 2000, 68).pixels);
    worst_px = std::max({worst_px, std::fabs(after - d / 2000.0 * before), std::fabs(after - canonical)});
  }
  if (worst_px > 2.0) fails.push_back("disk diameter off by " + format_real(worst_px) + " px");
  // Split partition over random record sets.
  std::mt19937_64 eng(2024);
  int split_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int k = 0;
    const auto labels = measure::random_labels(eng, k);
    std::string why;
    if (measure::split_partition_ok(labels, k, ttl::split_indices(labels, k, static_cast<std::uint64_t>(trial)), why))
      ++split_ok;
    else if (fails.size() < 5)
      fails.push_back("split trial " + std::to_string(trial) + ": " + why);
  }
  // Confusion rows are distributions.
  double worst_row = 0;
  std::uniform_int_distribution<int> pick(0, 6);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> truth(500), pred(500);
    for (auto& t : truth) t = pick(eng);
    for (auto& p : pred) p = pick(eng);
    const auto m = ttl::confusion_matrix(truth, pred, 7);
    for (int r = 0; r < 7; ++r) {
      if (m.empty_row[r]) continue;
      double s = 0;
      for (const double v : m.normalized[r]) s += v;
      worst_row = std::max(worst_row, std::fabs(s - 1.0));
    }
  }
  if (worst_row > 1e-9) fails.push_back("confusion row sum off by " + format_real(worst_row, 3));

  Verdict v;
  v.pass = fails.empty();
  v.detail = "projection idempotent, max disk diameter error " + format_real(worst_px, 3) + " px (tol 2), " +
             std::to_string(split_ok) + "/100 random splits valid, max |row sum - 1| " + format_real(worst_row, 3);
  for (const auto& f : fails) v.detail += "; " + f;
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  Options opt;
  std::vector<int> only;
  app.add_option("--out", opt.out, "directory for run artifacts");
  app.add_option("--only", only, "criterion numbers to run (default all)");
  app.add_option("--seeds", opt.seeds, "benchmark seeds");
  app.add_option("--config", opt.config, "benchmark experiment config");
  app.add_option("--spec", opt.spec, "benchmark synthetic spec");
  CLI11_PARSE(app, argc, argv);

  torch::set_num_threads(1);
  fs::create_directories(opt.out);
  Benchmark bench;

  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = no runtime bound
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "loss oracles", 10, loss_oracles},
      {2, "gradient check", 120, gradients},
      {3, "FID oracle", 10, fid_oracle},
      {4, "frozen source and no label leak", 300, frozen_and_no_leak},
      {5, "schedule conformance", 0, [&] { return schedule(opt); }},
      {6, "desk-scale transfer", 3600, [&] { return transfer(bench, opt); }},
      {7, "fine-tuning order", 900, [&] { return finetune(bench, opt); }},
      {8, "data pipeline", 30, pipeline},
  };

  nlohmann::json report = nlohmann::json::array();
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    // The transfer criterion reports the summed per-seed time, excluding
    // work shared with other criteria.
    double secs = seconds_since(t0);
    if (c.id == 6) {
      secs = 0;
      for (const auto& [s, o] : bench.outcomes) secs += o.seconds;
    }
    const bool in_time = c.limit_s == 0 || secs <= c.limit_s;
    const bool pass = v.pass && in_time;
    if (!pass) ++failed;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << v.detail << " ("
              << format_real(secs, 3) << " s";
    if (c.limit_s > 0) std::cout << ", limit " << format_real(c.limit_s) << " s" << (in_time ? "" : " EXCEEDED");
    std::cout << ")" << std::endl;
    report.push_back({{"criterion", c.id}, {"name", c.name}, {"pass", pass}, {"detail", v.detail}, {"seconds", secs}});
  }
  ttl::write_json(opt.out / "acceptance.json", report);
  return failed == 0 ? 0 : 1;
}
