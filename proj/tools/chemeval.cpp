//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemeval/cli/evaluate.h"
#include "chemeval/curation/quality.h"
#include "chemeval/curation/records.h"
#include "chemeval/curation/split.h"
#include "chemeval/lora/trainer.h"
#include "chemeval/protocol/document.h"
#include "chemeval/protocol/format_check.h"
#include "chemeval/routes/rules.h"
#include "chemeval/validity/validity.h"

namespace fs = std::filesystem;
using namespace chemeval;

namespace {

struct Globals {
  std::uint64_t seed = 42;
  int jobs = 1;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ifstream open_in(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot read " + path.string());
  return in;
}

/// Writes to a file, or to stdout for an empty path.
class Sink {
public:
  explicit Sink(const std::string &path) {
    if (path.empty())
      return;
    file_.open(path);
    if (!file_)
      throw IoError("cannot write " + path);
  }
  std::ostream &out() { return file_.is_open() ? file_ : std::cout; }
  bool to_stdout() const { return !file_.is_open(); }

private:
  std::ofstream file_;
};

/// Runs fn(i) for i in [0, n) on `jobs` threads; results go to index i.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)> &fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

std::string format_rate(const stats::RateEstimate &r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%ld/%ld = %.1f%% (95%% CI %.1f%% to %.1f%%)",
                r.successes, r.trials, 100.0 * r.point, 100.0 * r.ci_low,
                100.0 * r.ci_high);
  return buf;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const Globals &g, const std::string &input,
                 const std::string &output) {
  auto in = open_in(input);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    const auto last = line.find_last_not_of(" \t\r");
    lines.push_back(line.substr(first, last - first + 1));
  }
  std::vector<validity::ValidityReport> reports(lines.size());
  parallel_for(lines.size(), g.jobs,
               [&](std::size_t i) { reports[i] = validity::validate(lines[i]); });
  Sink sink(output);
  for (const auto &r : reports)
    sink.out() << validity::to_jsonl(r) << '\n';
  if (reports.empty()) {
    std::cout << "valid: 0/0 (empty input)\n";
    return 0;
  }
  std::cout << "valid: " << format_rate(validity::corpus_validity_rate(reports))
            << '\n';
  return 0;
}

// ----------------------------------------------------------- format-check

std::vector<fs::path> collect_documents(const std::vector<std::string> &paths) {
  std::vector<fs::path> out;
  for (const auto &p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto &e : fs::directory_iterator(p)) {
        const auto ext = e.path().extension();
        if (e.is_regular_file() && (ext == ".md" || ext == ".txt"))
          found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      out.emplace_back(p);
    } else {
      throw IoError("no such file or directory: " + p);
    }
  }
  return out;
}

protocol::Profile load_profile(const std::string &path) {
  if (path.empty())
    return protocol::Profile::default_template();
  auto in = open_in(path);
  return protocol::Profile::parse(in);
}

int cmd_format_check(const Globals &g, const std::vector<std::string> &inputs,
                     const std::string &profile_path, const std::string &output) {
  const auto profile = load_profile(profile_path);
  const auto files = collect_documents(inputs);
  std::vector<std::string> lines(files.size());
  std::vector<protocol::FormatReport> reports(files.size());
  parallel_for(files.size(), g.jobs, [&](std::size_t i) {
    const auto doc = protocol::parse_document(read_file(files[i]));
    reports[i] = protocol::check_format(doc, profile);
    auto j = nlohmann::ordered_json::parse(protocol::to_jsonl(reports[i], doc));
    nlohmann::ordered_json line;
    line["file"] = files[i].string();
    for (auto it = j.begin(); it != j.end(); ++it)
      line[it.key()] = it.value();
    lines[i] = line.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  });
  Sink sink(output);
  for (const auto &l : lines)
    sink.out() << l << '\n';
  if (reports.empty()) {
    std::cout << "adherent: 0/0 (no documents)\n";
    return 0;
  }
  std::cout << "adherent: " << format_rate(protocol::corpus_adherence_rate(reports))
            << '\n';
  for (const auto &rate : protocol::requirement_rates(reports)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "  %-20s %ld/%ld applicable pass (%.1f%%), %.1f%% of all outputs\n",
                  std::string(protocol::to_string(rate.requirement)).c_str(),
                  rate.passed, rate.applicable, 100.0 * rate.per_applicable(),
                  100.0 * rate.per_all());
    std::cout << buf;
  }
  return 0;
}

// ----------------------------------------------------------------- curate

struct CurateArgs {
  std::string input;
  std::string output;
  std::string records_out;
  std::string qc_out;
};

int cmd_curate(const Globals &g, const CurateArgs &a) {
  auto in = open_in(a.input);
  auto read = curation::read_records(in);
  for (const auto &e : read.errors)
    std::cerr << "skipped " << e << '\n';

  std::vector<curation::StandardizeOutcome> outcomes(read.records.size());
  parallel_for(read.records.size(), g.jobs, [&](std::size_t i) {
    outcomes[i] = curation::standardize_record(read.records[i]);
  });
  std::vector<curation::DatasetRecord> records;
  long standardization_failures = 0;
  for (auto &o : outcomes) {
    if (!o.failures.empty()) {
      ++standardization_failures;
      for (const auto &f : o.failures)
        std::cerr << "record " << o.record.id << ": cannot standardize " << f << '\n';
    }
    records.push_back(std::move(o.record));
  }

  const auto qc = curation::quality_control(records);
  if (!a.qc_out.empty()) {
    Sink sink(a.qc_out);
    for (const auto &f : qc.flags)
      sink.out() << curation::to_jsonl(f, records[f.record]) << '\n';
  }

  std::vector<bool> drop(records.size(), false);
  long dropped_invalid = 0;
  for (const auto &f : qc.flags)
    if (f.check != curation::QcCheck::kDuplicate &&
        f.check != curation::QcCheck::kOutlier && !drop[f.record]) {
      drop[f.record] = true;
      ++dropped_invalid;
    }
  std::vector<curation::DatasetRecord> clean;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (!drop[i])
      clean.push_back(records[i]);
  const auto dedup = curation::deduplicate(clean);

  Sink sink(a.output);
  for (const auto &r : dedup.kept)
    sink.out() << curation::emit_instruction_record(r) << '\n';
  if (!a.records_out.empty()) {
    Sink full(a.records_out);
    for (const auto &r : dedup.kept)
      full.out() << curation::to_jsonl(r) << '\n';
  }

  std::ostream &report = sink.to_stdout() ? std::cerr : std::cout;
  report << "records read: " << read.records.size()
         << " (unparsable lines: " << read.errors.size() << ")\n"
         << "standardization failures: " << standardization_failures << '\n';
  for (auto c : curation::kAllChecks)
    report << "qc " << curation::to_string(c) << ": " << qc.count(c) << '\n';
  report << "removed (validity/balance): " << dropped_invalid << '\n'
         << "removed (duplicates): " << dedup.removed << '\n'
         << "kept: " << dedup.kept.size() << '\n';
  return 0;
}

// ------------------------------------------------------------------ split

curation::SplitRatios parse_ratios(const std::string &text) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      v.push_back(std::stod(part));
    } catch (const std::exception &) {
      throw curation::RatioError("ratio '" + part + "' is not a number");
    }
  }
  if (v.size() != 3)
    throw curation::RatioError("expected three ratios train,validation,test");
  curation::SplitRatios r{v[0], v[1], v[2]};
  r.check();
  return r;
}

int cmd_split(const Globals &g, const std::string &input, const std::string &output,
              const std::string &ratios_text) {
  const auto ratios = parse_ratios(ratios_text);
  auto in = open_in(input);
  auto read = curation::read_records(in);
  for (const auto &e : read.errors)
    std::cerr << "skipped " << e << '\n';
  std::vector<std::string> keys(read.records.size());
  parallel_for(read.records.size(), g.jobs, [&](std::size_t i) {
    keys[i] = curation::group_key(read.records[i]);
  });
  std::vector<curation::TaskCategory> categories;
  for (const auto &r : read.records)
    categories.push_back(r.task_category);
  const auto assignment = curation::assign_groups(keys, categories, ratios, g.seed);

  Sink sink(output);
  for (std::size_t i = 0; i < read.records.size(); ++i)
    sink.out() << curation::manifest_line(read.records[i], assignment, i) << '\n';
  std::ostream &report = sink.to_stdout() ? std::cerr : std::cout;
  const auto counts = assignment.counts();
  const double n = static_cast<double>(read.records.size());
  for (std::size_t s = 0; s < 3; ++s) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-10s %ld (%.2f%%)\n",
                  std::string(curation::to_string(static_cast<curation::Split>(s))).c_str(),
                  counts[s], n > 0 ? 100.0 * static_cast<double>(counts[s]) / n : 0.0);
    report << buf;
  }
  for (const auto &w : assignment.warnings)
    report << "warning: " << w << '\n';
  return 0;
}

// --------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string outputs_dir;
  std::string profile;
  std::string catalog;
  std::string rules;
  std::string report;
  std::string documents;
  double margin = 0.05;
  double alpha = 0.05;
};

int cmd_evaluate(const Globals &g, const EvaluateArgs &a) {
  const auto metas = cli::read_manifest(a.outputs_dir);
  cli::EvaluationContext ctx;
  ctx.profile = load_profile(a.profile);
  std::optional<routes::Catalog> catalog;
  if (!a.catalog.empty()) {
    catalog = routes::Catalog::load(a.catalog);
    ctx.catalog = &*catalog;
  }
  std::optional<routes::RuleTable> rules;
  if (!a.rules.empty()) {
    rules = routes::load_rule_table(a.rules);
    ctx.rules = &*rules;
  }

  std::vector<cli::DocumentResult> results(metas.size());
  parallel_for(metas.size(), g.jobs, [&](std::size_t i) {
    const auto text = read_file(fs::path(a.outputs_dir) / metas[i].file);
    results[i] = cli::evaluate_document(metas[i], text, ctx);
  });

  if (!a.documents.empty()) {
    Sink docs(a.documents);
    for (const auto &r : results) {
      nlohmann::ordered_json j;
      j["file"] = r.meta.file;
      j["model"] = r.meta.model;
      j["task_id"] = r.meta.task_id;
      j["task_category"] = curation::to_string(r.meta.category);
      j["adherent"] = r.adherent;
      j["smiles_total"] = r.smiles_total;
      j["smiles_valid"] = r.smiles_valid;
      j["error_codes"] = r.error_codes;
      if (r.feasible)
        j["feasible"] = *r.feasible;
      j["route_failures"] = r.route_failures;
      docs.out() << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace)
                 << '\n';
    }
  }

  const auto report = cli::aggregate(results, 0.95, a.margin, a.alpha);
  if (!a.report.empty()) {
    Sink sink(a.report);
    for (const auto &line : cli::report_jsonl(report))
      sink.out() << line << '\n';
  }
  std::cout << cli::render_report(report);
  return 0;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const std::string &input, const std::string &output, double margin,
                double alpha) {
  auto in = open_in(input);
  std::map<std::string, std::map<std::string, bool>> verdicts;
  std::set<std::string> tasks;
  int number = 0;
  for (std::string line; std::getline(in, line);) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      const std::string model = j.at("model").get<std::string>();
      const std::string task = j.at("task").is_string()
                                   ? j.at("task").get<std::string>()
                                   : j.at("task").dump();
      verdicts[model][task] = j.at("correct").get<bool>();
      tasks.insert(task);
    } catch (const nlohmann::json::exception &e) {
      throw IoError(input + ":" + std::to_string(number) +
                    ": expected {\"model\", \"task\", \"correct\"}");
    }
  }
  stats::VerdictTable table;
  table.tasks.assign(tasks.begin(), tasks.end());
  for (const auto &[model, by_task] : verdicts) {
    table.models.push_back(model);
    std::vector<std::optional<bool>> row;
    for (const auto &t : table.tasks) {
      auto it = by_task.find(t);
      row.push_back(it == by_task.end() ? std::nullopt : std::optional<bool>(it->second));
    }
    table.verdicts.push_back(std::move(row));
  }
  const auto results = stats::compare_models(table, margin, alpha);
  if (!output.empty()) {
    Sink sink(output);
    for (const auto &c : results)
      sink.out() << cli::comparison_jsonl(c, "") << '\n';
  }
  if (results.empty())
    std::cout << "no model pairs to compare\n";
  std::cout << cli::render_comparisons(results);
  return 0;
}

// -------------------------------------------------------------- lora-demo

int cmd_lora_demo(const Globals &g, const std::string &config_path,
                  const std::string &checkpoint_dir, const std::string &log_path,
                  bool seed_given) {
  lora::DemoConfig cfg;
  if (!config_path.empty()) {
    auto in = open_in(config_path);
    cfg = lora::DemoConfig::parse(in);
  }
  if (seed_given)
    cfg.train.seed = g.seed;

  auto model = lora::ToyModel::two_layer(cfg.d_model, cfg.d_model, cfg.d_model,
                                         cfg.train.seed);
  model.attach(cfg.targets, cfg.adapter, cfg.train.seed);
  double fresh_delta = 0.0;
  for (auto t : cfg.targets)
    fresh_delta = std::max(fresh_delta, lora::delta(*model.adapter(t)).cwiseAbs().maxCoeff());

  std::array<Eigen::MatrixXd, 4> base_before;
  for (auto t : lora::kAllTargets)
    base_before[static_cast<std::size_t>(t)] = model.base(t);

  const auto train = lora::make_teacher_task(model, std::max(1, cfg.adapter.r / 2),
                                             cfg.train_samples, 0.01, cfg.train.seed + 101);
  const auto eval = lora::make_teacher_task(model, std::max(1, cfg.adapter.r / 2),
                                            cfg.eval_samples, 0.01, cfg.train.seed + 101);
  std::cout << "trainable = " << model.trainable_count() << '\n'
            << "full fine-tuning = " << model.full_finetune_count() << '\n'
            << "fresh adapter max |delta W| = " << fresh_delta << '\n';

  Sink log(log_path);
  lora::TrainOptions options;
  if (!checkpoint_dir.empty())
    options.checkpoint_dir = checkpoint_dir;
  options.on_epoch = [&](const lora::EpochLog &e) {
    if (!log.to_stdout())
      log.out() << lora::to_jsonl(e) << '\n';
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "epoch %d  step %ld  lr %.3e  train %.6f  eval %.6f\n", e.epoch,
                  e.step, e.lr, e.train_loss, e.eval_loss);
    std::cout << buf;
  };
  const auto result = lora::train_toy(model, train, eval, cfg.train, options);

  bool frozen = true;
  for (auto t : lora::kAllTargets) {
    const auto &before = base_before[static_cast<std::size_t>(t)];
    const auto &after = model.base(t);
    frozen = frozen && before.size() == after.size() &&
             std::equal(before.data(), before.data() + before.size(), after.data(),
                        [](double x, double y) {
                          return std::memcmp(&x, &y, sizeof x) == 0;
                        });
  }

  lora::Dataset probe;
  probe.X = train.X.leftCols(std::min<Eigen::Index>(8, train.X.cols()));
  probe.Y = train.Y.leftCols(probe.X.cols());
  const auto check = lora::gradient_check(model, probe, 1e-5);

  std::cout << "optimizer steps = " << result.optimizer_steps << " of "
            << result.total_steps << " (" << result.micro_batches
            << " micro-batches)\n"
            << "train loss " << result.initial_train_loss << " -> "
            << model.loss(train) << '\n'
            << "base weights unchanged: " << (frozen ? "yes" : "NO") << '\n'
            << "gradient check max relative error = " << check.max_relative_error
            << " over " << check.entries << " entries\n";
  for (const auto &p : result.checkpoints)
    std::cout << "checkpoint " << p.string() << '\n';
  return frozen ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"chemeval: chemistry output validation, curation and evaluation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file supplying option defaults");
  app.allow_config_extras(CLI::config_extras_mode::error);
  Globals g;
  auto *seed_opt = app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads for per-item work")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::string input, output, profile;
  std::vector<std::string> inputs;

  auto *validate = app.add_subcommand("validate", "validate one SMILES per line");
  validate->add_option("input", input, "SMILES file")->required();
  validate->add_option("-o,--output", output, "per-line reports (JSONL)");

  auto *format = app.add_subcommand("format-check", "check documents against a profile");
  format->add_option("inputs", inputs, "files or directories (*.md, *.txt)")->required();
  format->add_option("--profile", profile, "requirement profile");
  format->add_option("-o,--output", output, "per-document reports (JSONL)");

  CurateArgs curate_args;
  auto *curate = app.add_subcommand("curate", "standardize, QC, deduplicate, emit");
  curate->add_option("input", curate_args.input, "records (JSONL)")->required();
  curate->add_option("-o,--output", curate_args.output, "instruction records (JSONL)");
  curate->add_option("--records", curate_args.records_out, "kept records with metadata");
  curate->add_option("--qc-report", curate_args.qc_out, "QC flags for review");

  std::string ratios = "0.85,0.10,0.05";
  auto *split = app.add_subcommand("split", "scaffold-aware train/validation/test split");
  split->add_option("input", input, "records (JSONL)")->required();
  split->add_option("-o,--output", output, "split manifest (JSONL)");
  split->add_option("--ratios", ratios, "train,validation,test")->capture_default_str();

  EvaluateArgs eval_args;
  auto *evaluate = app.add_subcommand("evaluate", "rates, error taxonomy and comparisons");
  evaluate->add_option("outputs", eval_args.outputs_dir,
                       "directory with documents and manifest.jsonl")
      ->required();
  evaluate->add_option("--profile", eval_args.profile, "requirement profile");
  evaluate->add_option("--catalog", eval_args.catalog, "starting-material catalog");
  evaluate->add_option("--rules", eval_args.rules, "rule table (default: built in)");
  evaluate->add_option("-o,--report", eval_args.report, "report records (JSONL)");
  evaluate->add_option("--documents", eval_args.documents, "per-document results (JSONL)");
  evaluate->add_option("--margin", eval_args.margin, "TOST equivalence margin")
      ->capture_default_str();
  evaluate->add_option("--alpha", eval_args.alpha, "significance level")
      ->capture_default_str();

  double margin = 0.05, alpha = 0.05;
  auto *compare = app.add_subcommand("compare", "pairwise tests over binary verdicts");
  compare->add_option("input", input, "{model, task, correct} records (JSONL)")->required();
  compare->add_option("-o,--output", output, "comparison records (JSONL)");
  compare->add_option("--margin", margin, "TOST equivalence margin")->capture_default_str();
  compare->add_option("--alpha", alpha, "significance level")->capture_default_str();

  std::string lora_config, checkpoint_dir, log_path;
  auto *demo = app.add_subcommand("lora-demo", "toy LoRA training with invariant checks");
  demo->add_option("--lora-config", lora_config, "hyperparameters as key = value lines");
  demo->add_option("--checkpoint-dir", checkpoint_dir, "write checkpoints here");
  demo->add_option("--log", log_path, "epoch log (JSONL)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate)
      return cmd_validate(g, input, output);
    if (*format)
      return cmd_format_check(g, inputs, profile, output);
    if (*curate)
      return cmd_curate(g, curate_args);
    if (*split)
      return cmd_split(g, input, output, ratios);
    if (*evaluate)
      return cmd_evaluate(g, eval_args);
    if (*compare)
      return cmd_compare(input, output, margin, alpha);
    if (*demo)
      return cmd_lora_demo(g, lora_config, checkpoint_dir, log_path,
                           seed_opt->count() > 0);
  } catch (const std::exception &e) {
    std::cerr << "chemeval: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
