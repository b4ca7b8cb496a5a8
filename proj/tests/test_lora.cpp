//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/SVD>

#include "chemeval/lora/adapter.h"
#include "chemeval/lora/schedule.h"
#include "chemeval/lora/toy_model.h"
#include "chemeval/lora/trainer.h"

using namespace chemeval::lora;
namespace fs = std::filesystem;

namespace {

bool bit_identical(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

void randomize_b(ToyModel &model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.1);
  for (Target t : kAllTargets)
    if (auto &a = model.adapter(t))
      for (Eigen::Index k = 0; k < a->B.size(); ++k)
        a->B.data()[k] = normal(rng);
}

std::vector<double> snapshot(ToyModel &model) {
  std::vector<double> out;
  for (double *p : model.trainable_entries())
    out.push_back(*p);
  return out;
}

void flip_sign(Gradients &g) { g *= -1.0; }

fs::path scratch(const std::string &name) {
  auto dir = fs::temp_directory_path() / ("chemeval_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("adapter initialization") {
  auto a = init_adapter(64, 32, 4, 8.0, 0.0, 1);
  CHECK(a.trainable_count() == 384);
  CHECK(a.rows() == 64);
  CHECK(a.cols() == 32);
  CHECK(a.B.isZero(0.0));
  CHECK(delta(a).isZero(0.0));
  CHECK(delta(a).rows() == 64);
  CHECK(delta(a).cols() == 32);

  auto same = init_adapter(64, 32, 4, 8.0, 0.0, 1);
  CHECK(bit_identical(a.A, same.A));
  CHECK_FALSE(bit_identical(a.A, init_adapter(64, 32, 4, 8.0, 0.0, 2).A));

  CHECK_THROWS_AS(init_adapter(8, 4, 5, 1.0, 0.0, 1), RankError);
  CHECK_THROWS_AS(init_adapter(8, 4, 0, 1.0, 0.0, 1), RankError);
}

TEST_CASE("initializer standard deviation over a million entries") {
  for (int r : {4, 8}) {
    auto a = init_adapter(r, 1'000'000 / r, r, 1.0, 0.0, 17);
    const double n = static_cast<double>(a.A.size());
    const double mean = a.A.sum() / n;
    const double var = (a.A.array() - mean).square().sum() / (n - 1.0);
    CHECK(std::abs(std::sqrt(var) * r - 1.0) < 0.02);
  }
  auto s = init_adapter(4, 250'000, 4, 1.0, 0.0, 5, Target::kQ, InitScale::kInverseSqrtRank);
  const double sd = std::sqrt(s.A.array().square().mean());
  CHECK(std::abs(sd * 2.0 - 1.0) < 0.02);
}

TEST_CASE("delta and merged forward") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  auto a = init_adapter(12, 9, 3, 3.0, 0.0, 4);
  for (Eigen::Index k = 0; k < a.B.size(); ++k)
    a.B.data()[k] = normal(rng);
  CHECK((delta(a) - a.B * a.A).norm() == 0.0);

  Eigen::MatrixXd W(12, 9);
  for (Eigen::Index k = 0; k < W.size(); ++k)
    W.data()[k] = normal(rng);
  Eigen::VectorXd x(9);
  for (Eigen::Index k = 0; k < x.size(); ++k)
    x[k] = normal(rng);

  a.alpha = 7.0;
  const Eigen::VectorXd explicit_form = (W + (a.alpha / a.r) * a.B * a.A) * x;
  const Eigen::VectorXd merged = merged_forward(W, a, x);
  CHECK((merged - explicit_form).norm() <= 1e-10 * explicit_form.norm());
  CHECK(merged_forward(W, a, Eigen::VectorXd::Zero(9)).isZero(0.0));

  auto fresh = init_adapter(12, 9, 3, 3.0, 0.0, 4);
  CHECK((merged_forward(W, fresh, x) - W * x).norm() == 0.0);

  CHECK_THROWS_AS(merged_forward(W, a, Eigen::VectorXd::Zero(8)), ShapeError);
  CHECK_THROWS_AS(merged_forward(Eigen::MatrixXd::Zero(11, 9), a, x), ShapeError);
}

TEST_CASE("delta rank never exceeds r") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int r : {1, 2, 5}) {
    auto a = init_adapter(20, 16, r, 1.0, 0.0, 10 + r);
    for (Eigen::Index k = 0; k < a.B.size(); ++k)
      a.B.data()[k] = normal(rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(delta(a));
    svd.setThreshold(1e-10);
    CHECK(svd.rank() <= r);
    CHECK(svd.rank() == r);
  }
}

TEST_CASE("cosine schedule with warmup") {
  const long total = 200;
  const double peak = 2e-4, warm = 0.03;
  const long warm_end = static_cast<long>(std::ceil(warm * total));
  CHECK(cosine_warmup_lr(0, total, warm, peak) == 0.0);
  CHECK(cosine_warmup_lr(warm_end, total, warm, peak) == doctest::Approx(peak));
  CHECK(std::abs(cosine_warmup_lr(total, total, warm, peak)) < 1e-12);
  CHECK(cosine_warmup_lr(0, total, 0.0, peak) == doctest::Approx(peak));

  double prev = -1.0;
  for (long s = 0; s <= total; ++s) {
    const double lr = cosine_warmup_lr(s, total, warm, peak);
    CHECK(lr >= 0.0);
    CHECK(lr <= peak * (1 + 1e-12));
    if (s <= warm_end)
      CHECK(lr >= prev);
    else
      CHECK(lr <= prev);
    if (s > 0)
      CHECK(std::abs(lr - prev) <= peak / static_cast<double>(warm_end) + 1e-15);
    prev = lr;
  }
  CHECK_THROWS_AS(cosine_warmup_lr(-1, total, warm, peak), DomainError);
  CHECK_THROWS_AS(cosine_warmup_lr(total + 1, total, warm, peak), DomainError);
  CHECK_THROWS_AS(cosine_warmup_lr(0, total, 1.0, peak), DomainError);
}

TEST_CASE("gradient check on the linear model") {
  auto model = ToyModel::linear(10, 6, 1);
  model.attach({Target::kO}, {3, 6.0, 0.0}, 2);
  randomize_b(model, 3);
  auto data = make_teacher_task(model, 2, 32, 0.01, 4);
  auto good = gradient_check(model, data, 1e-6);
  CHECK(good.entries == model.trainable_count());
  CHECK(good.max_relative_error < 1e-6);

  CHECK_THROWS_AS(model.attach({Target::kQ}, {3, 6.0, 0.0}, 2), ShapeError);

  auto bad = gradient_check(model, data, 1e-6, flip_sign);
  CHECK(bad.max_relative_error > 1e-2);
}

TEST_CASE("gradient check on the two-layer model") {
  auto model = ToyModel::two_layer(8, 8, 5, 1);
  model.attach({Target::kQ, Target::kK, Target::kV, Target::kO}, {2, 4.0, 0.0}, 2);
  randomize_b(model, 3);
  auto data = make_teacher_task(model, 2, 16, 0.01, 4);
  CHECK(gradient_check(model, data, 1e-6).max_relative_error < 1e-6);
}

TEST_CASE("zero-loss point has vanishing gradients") {
  auto model = ToyModel::linear(6, 4, 1);
  model.attach({Target::kO}, {2, 2.0, 0.0}, 2);
  Dataset d;
  d.X = Eigen::MatrixXd::Random(6, 10);
  d.Y = model.forward(d.X);
  CHECK(model.loss(d) == doctest::Approx(0.0));
  auto g = gradient_check(model, d, 1e-6);
  CHECK(g.max_abs_analytic < 1e-9);
  CHECK(g.max_abs_numeric < 1e-6);
}

TEST_CASE("gradient accumulation matches the full batch") {
  auto run = [](int batch, int accumulation) {
    auto model = ToyModel::two_layer(6, 8, 4, 1);
    model.attach({Target::kQ, Target::kV, Target::kO}, {2, 4.0, 0.0}, 2);
    auto data = make_teacher_task(model, 2, 16, 0.05, 3);
    ToyTrainConfig cfg;
    cfg.epochs = 3;
    cfg.batch_size = batch;
    cfg.accumulation_steps = accumulation;
    cfg.warmup_ratio = 0.0;
    cfg.learning_rate = 1e-2;
    train_toy(model, data, data, cfg);
    return snapshot(model);
  };
  for (int g : {2, 4}) {
    const auto full = run(16, 1);
    const auto accumulated = run(16 / g, g);
    REQUIRE(full.size() == accumulated.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i)
      worst = std::max(worst, std::abs(full[i] - accumulated[i]) /
                                  std::max(std::abs(full[i]), 1e-12));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("training converges on a linear task and leaves the base frozen") {
  auto model = ToyModel::linear(16, 8, 1);
  model.attach({Target::kO}, {4, 8.0, 0.0}, 2);
  const Eigen::MatrixXd before = model.base(Target::kO);
  auto train = make_teacher_task(model, 3, 256, 0.0, 5);
  auto eval = make_teacher_task(model, 3, 64, 0.0, 5);
  ToyTrainConfig cfg;
  cfg.epochs = 25;
  cfg.batch_size = 16;
  cfg.accumulation_steps = 2;
  cfg.learning_rate = 2e-2;
  auto result = train_toy(model, train, eval, cfg);
  CHECK(result.optimizer_steps <= 200);
  CHECK(result.optimizer_steps == result.total_steps);
  CHECK(result.micro_batches == 16L * 25);
  CHECK(model.loss(train) < 0.1 * result.initial_train_loss);
  CHECK(bit_identical(before, model.base(Target::kO)));
  REQUIRE(result.log.size() == 25);
  CHECK(result.log.back().step == result.optimizer_steps);
}

TEST_CASE("training is deterministic without dropout") {
  auto run = [] {
    auto model = ToyModel::two_layer(6, 8, 4, 1);
    model.attach({Target::kQ, Target::kK}, {2, 4.0, 0.0}, 2);
    auto data = make_teacher_task(model, 2, 40, 0.05, 3);
    ToyTrainConfig cfg;
    cfg.epochs = 2;
    cfg.batch_size = 8;
    cfg.accumulation_steps = 1;
    train_toy(model, data, data, cfg);
    return snapshot(model);
  };
  CHECK(run() == run());
}

TEST_CASE("checkpoints round trip") {
  const auto dir = scratch("ckpt");
  auto model = ToyModel::two_layer(6, 8, 4, 1);
  model.attach({Target::kQ, Target::kO}, {2, 4.0, 0.05}, 2);
  std::array<Eigen::MatrixXd, 4> bases;
  for (Target t : kAllTargets)
    bases[static_cast<std::size_t>(t)] = model.base(t);
  auto data = make_teacher_task(model, 2, 32, 0.05, 3);
  ToyTrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 8;
  cfg.accumulation_steps = 2;
  cfg.checkpoint_interval = 2;
  TrainOptions opt;
  opt.checkpoint_dir = dir;
  int callbacks = 0;
  opt.on_epoch = [&](const EpochLog &) { ++callbacks; };
  opt.eval_metrics = [](const ToyModel &m, const Dataset &d) {
    return std::map<std::string, double>{{"rmse", std::sqrt(2.0 * m.loss(d))}};
  };
  auto result = train_toy(model, data, data, cfg, opt);
  CHECK(callbacks == 5);
  REQUIRE(result.checkpoints.size() == 3);  // epochs 2, 4 and the final 5
  CHECK(result.log.back().metrics.count("rmse") == 1);
  for (Target t : kAllTargets)
    CHECK(bit_identical(bases[static_cast<std::size_t>(t)], model.base(t)));

  auto restored = ToyModel::two_layer(6, 8, 4, 1);
  restored.attach({Target::kQ, Target::kO}, {2, 4.0, 0.05}, 99);
  load_checkpoint(restored, result.checkpoints.back());
  CHECK(snapshot(restored) == snapshot(model));

  const auto line = to_jsonl(result.log.front());
  CHECK(line.find("\"train_loss\"") != std::string::npos);
  CHECK(line.find("\"eval_loss\"") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("parameter accounting at toy scale") {
  auto model = ToyModel::two_layer(64, 64, 64, 1);
  model.attach({Target::kQ, Target::kK, Target::kV, Target::kO}, {16, 32.0, 0.0}, 2);
  CHECK(model.trainable_count() == 8192);
  CHECK(model.full_finetune_count() == 16384);
  auto partial = ToyModel::two_layer(64, 64, 64, 1);
  partial.attach({Target::kQ, Target::kV}, {16, 32.0, 0.0}, 2);
  CHECK(partial.trainable_count() == 4096);
}

TEST_CASE("config validation") {
  ToyTrainConfig ok;
  CHECK_NOTHROW(ok.check());
  for (auto mutate : std::vector<void (*)(ToyTrainConfig &)>{
           [](ToyTrainConfig &c) { c.epochs = 0; },
           [](ToyTrainConfig &c) { c.batch_size = 0; },
           [](ToyTrainConfig &c) { c.learning_rate = 0.0; },
           [](ToyTrainConfig &c) { c.accumulation_steps = 0; },
           [](ToyTrainConfig &c) { c.warmup_ratio = 1.0; },
           [](ToyTrainConfig &c) { c.checkpoint_interval = 0; }}) {
    ToyTrainConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.check(), ConfigError);
  }

  std::istringstream cfg("# demo\ntraining_epochs = 3\nlora_rank = 8\ntarget_modules = q, v\n");
  auto demo = DemoConfig::parse(cfg);
  CHECK(demo.train.epochs == 3);
  CHECK(demo.adapter.r == 8);
  CHECK(demo.targets == std::vector<Target>{Target::kQ, Target::kV});
  std::istringstream bad("target_modules = q, mlp\n");
  CHECK_THROWS_AS(DemoConfig::parse(bad), ConfigError);
}
