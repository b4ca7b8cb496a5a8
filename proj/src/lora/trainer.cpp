//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/lora/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "chemeval/lora/schedule.h"

namespace chemeval::lora {

namespace fs = std::filesystem;

void ToyTrainConfig::check() const {
  if (epochs < 1 || batch_size < 1 || accumulation_steps < 1 ||
      checkpoint_interval < 1)
    throw ConfigError("epochs, batch_size, accumulation_steps and "
                      "checkpoint_interval must be positive");
  if (!(learning_rate > 0.0))
    throw ConfigError("learning_rate must be positive");
  if (!(weight_decay >= 0.0))
    throw ConfigError("weight_decay must be non-negative");
  if (!(warmup_ratio >= 0.0 && warmup_ratio < 1.0))
    throw ConfigError("warmup_ratio must be in [0, 1)");
}

void AdamW::step(ToyModel &model, const Gradients &grads, double lr,
                 double weight_decay) {
  if (t_ == 0) {
    m_.set_zero_like(model);
    v_.set_zero_like(model);
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto update = [&](Eigen::MatrixXd &p, const Eigen::MatrixXd &g,
                    Eigen::MatrixXd &m, Eigen::MatrixXd &v) {
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
    p *= 1.0 - lr * weight_decay;
    p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
  };
  for (auto t : kAllTargets) {
    auto &a = model.adapter(t);
    if (!a)
      continue;
    const auto k = static_cast<std::size_t>(t);
    update(a->A, grads.dA[k], m_.dA[k], v_.dA[k]);
    update(a->B, grads.dB[k], m_.dB[k], v_.dB[k]);
  }
}

std::string to_jsonl(const EpochLog &log) {
  nlohmann::ordered_json j;
  j["epoch"] = log.epoch;
  j["step"] = log.step;
  j["lr"] = log.lr;
  j["train_loss"] = log.train_loss;
  j["eval_loss"] = log.eval_loss;
  for (const auto &[k, v] : log.metrics)
    j[k] = v;
  return j.dump();
}

TrainResult train_toy(ToyModel &model, const Dataset &train,
                      const Dataset &eval, const ToyTrainConfig &cfg,
                      const TrainOptions &options) {
  cfg.check();
  if (model.trainable_count() == 0)
    throw ConfigError("model has no adapters attached");
  if (train.size() == 0)
    throw ConfigError("empty training set");

  const long n = train.size();
  const long batches_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
  TrainResult result;
  result.total_steps = batches_per_epoch * cfg.epochs / cfg.accumulation_steps;
  if (result.total_steps < 1)
    throw ConfigError("run is shorter than one accumulation window");
  result.initial_train_loss = model.loss(train);

  std::mt19937_64 rng(cfg.seed);
  AdamW optimizer;
  Gradients accumulated, micro;
  accumulated.set_zero_like(model);
  const double inv_g = 1.0 / cfg.accumulation_steps;
  double lr = 0.0;
  std::vector<long> order(static_cast<std::size_t>(n));

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0L);
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (long b = 0; b < batches_per_epoch; ++b) {
      const auto first = order.begin() + b * cfg.batch_size;
      const auto last = order.begin() + std::min(n, (b + 1) * cfg.batch_size);
      const Dataset batch = train.slice(std::vector<long>(first, last));
      loss_sum += model.loss_and_gradients(batch, micro, &rng);
      micro *= inv_g;
      accumulated += micro;
      ++result.micro_batches;
      if (result.micro_batches % cfg.accumulation_steps == 0 &&
          result.optimizer_steps < result.total_steps) {
        lr = cosine_warmup_lr(result.optimizer_steps, result.total_steps,
                              cfg.warmup_ratio, cfg.learning_rate);
        optimizer.step(model, accumulated, lr, cfg.weight_decay);
        ++result.optimizer_steps;
        accumulated.set_zero_like(model);
      }
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.step = result.optimizer_steps;
    entry.lr = lr;
    entry.train_loss = loss_sum / static_cast<double>(batches_per_epoch);
    entry.eval_loss = model.loss(eval);
    if (options.eval_metrics)
      entry.metrics = options.eval_metrics(model, eval);
    if (options.on_epoch)
      options.on_epoch(entry);
    result.log.push_back(std::move(entry));

    if (options.checkpoint_dir &&
        (epoch % cfg.checkpoint_interval == 0 || epoch == cfg.epochs))
      result.checkpoints.push_back(write_checkpoint(
          model, *options.checkpoint_dir, epoch, result.optimizer_steps));
  }
  return result;
}

namespace {

void write_matrix(const fs::path &file, const Eigen::MatrixXd &m) {
  std::ofstream out(file, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + file.string());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::uint64_t bits;
      const double v = m(i, j);
      std::memcpy(&bits, &v, sizeof bits);
      char bytes[8];
      for (int k = 0; k < 8; ++k)
        bytes[k] = static_cast<char>((bits >> (8 * k)) & 0xff);
      out.write(bytes, 8);
    }
  }
}

Eigen::MatrixXd read_matrix(const fs::path &file, Eigen::Index rows,
                            Eigen::Index cols) {
  std::ifstream in(file, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + file.string());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      unsigned char bytes[8];
      if (!in.read(reinterpret_cast<char *>(bytes), 8))
        throw std::runtime_error(file.string() + " is truncated");
      std::uint64_t bits = 0;
      for (int k = 0; k < 8; ++k)
        bits |= static_cast<std::uint64_t>(bytes[k]) << (8 * k);
      double v;
      std::memcpy(&v, &bits, sizeof v);
      m(i, j) = v;
    }
  }
  return m;
}

}  // namespace

fs::path write_checkpoint(const ToyModel &model, const fs::path &dir, int epoch,
                          long step) {
  std::ostringstream name;
  name << "epoch-" << std::setw(3) << std::setfill('0') << epoch;
  const fs::path out = dir / name.str();
  fs::create_directories(out);

  nlohmann::ordered_json manifest;
  manifest["epoch"] = epoch;
  manifest["step"] = step;
  manifest["dtype"] = "float64";
  manifest["byte_order"] = "little-endian";
  manifest["layout"] = "row-major";
  auto adapters = nlohmann::ordered_json::array();
  for (auto t : kAllTargets) {
    const auto &a = model.adapter(t);
    if (!a)
      continue;
    const std::string tag(to_string(t));
    write_matrix(out / (tag + ".A.bin"), a->A);
    write_matrix(out / (tag + ".B.bin"), a->B);
    adapters.push_back({{"target", tag},
                        {"r", a->r},
                        {"alpha", a->alpha},
                        {"A", {{"file", tag + ".A.bin"}, {"shape", {a->A.rows(), a->A.cols()}}}},
                        {"B", {{"file", tag + ".B.bin"}, {"shape", {a->B.rows(), a->B.cols()}}}}});
  }
  manifest["adapters"] = std::move(adapters);
  std::ofstream(out / "manifest.json") << manifest.dump(2) << '\n';
  return out;
}

void load_checkpoint(ToyModel &model, const fs::path &epoch_dir) {
  std::ifstream in(epoch_dir / "manifest.json");
  if (!in)
    throw std::runtime_error("no manifest.json in " + epoch_dir.string());
  const auto manifest = nlohmann::json::parse(in);
  for (const auto &entry : manifest.at("adapters")) {
    const auto t = target_from_string(entry.at("target").get<std::string>());
    if (!t || !model.adapter(*t))
      throw ShapeError("checkpoint adapter does not match the model");
    auto &a = *model.adapter(*t);
    const auto load = [&](const char *key, Eigen::MatrixXd &dst) {
      const auto &spec = entry.at(key);
      const auto rows = spec.at("shape")[0].get<Eigen::Index>();
      const auto cols = spec.at("shape")[1].get<Eigen::Index>();
      if (rows != dst.rows() || cols != dst.cols())
        throw ShapeError("checkpoint matrix shape does not match the model");
      dst = read_matrix(epoch_dir / spec.at("file").get<std::string>(), rows, cols);
    };
    load("A", a.A);
    load("B", a.B);
  }
}

DemoConfig DemoConfig::parse(std::istream &in) {
  DemoConfig c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const auto eq = line.find('=');
    const auto blank = line.find_first_not_of(" \t\r");
    if (blank == std::string::npos)
      continue;
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(number) +
                        ": expected key = value");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "lora_rank") c.adapter.r = std::stoi(value);
      else if (key == "lora_alpha") c.adapter.alpha = std::stod(value);
      else if (key == "lora_dropout") c.adapter.dropout_p = std::stod(value);
      else if (key == "init_std") {
        if (value == "1/r") c.adapter.scale = InitScale::kInverseRank;
        else if (value == "1/sqrt(r)") c.adapter.scale = InitScale::kInverseSqrtRank;
        else throw ConfigError("init_std must be 1/r or 1/sqrt(r)");
      } else if (key == "target_modules") {
        c.targets.clear();
        std::istringstream names(value);
        for (std::string name; std::getline(names, name, ',');) {
          const auto t = target_from_string(trim(name));
          if (!t)
            throw ConfigError("unknown target module '" + trim(name) + "'");
          c.targets.push_back(*t);
        }
      } else if (key == "learning_rate") c.train.learning_rate = std::stod(value);
      else if (key == "batch_size") c.train.batch_size = std::stoi(value);
      else if (key == "weight_decay") c.train.weight_decay = std::stod(value);
      else if (key == "gradient_accumulation_steps") c.train.accumulation_steps = std::stoi(value);
      else if (key == "warmup_ratio") c.train.warmup_ratio = std::stod(value);
      else if (key == "training_epochs") c.train.epochs = std::stoi(value);
      else if (key == "checkpoint_interval") c.train.checkpoint_interval = std::stoi(value);
      else if (key == "seed") c.train.seed = std::stoull(value);
      else if (key == "d_model") c.d_model = std::stoi(value);
      else if (key == "train_samples") c.train_samples = std::stol(value);
      else if (key == "eval_samples") c.eval_samples = std::stol(value);
      else if (key == "learning_rate_schedule") {
        if (value != "cosine")
          throw ConfigError("only the cosine schedule is implemented");
      } else
        throw ConfigError("unknown key '" + key + "'");
    } catch (const std::logic_error &e) {
      if (dynamic_cast<const ConfigError *>(&e))
        throw;
      throw ConfigError("config line " + std::to_string(number) +
                        ": bad value for " + key);
    }
  }
  c.train.check();
  return c;
}

}  // namespace chemeval::lora
