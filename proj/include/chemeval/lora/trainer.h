//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_LORA_TRAINER_H_
#define CHEMEVAL_LORA_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemeval/lora/toy_model.h"

namespace chemeval::lora {

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct ToyTrainConfig {
  int epochs = 8;
  int batch_size = 16;
  double learning_rate = 1e-2;
  double weight_decay = 0.01;
  int accumulation_steps = 4;
  double warmup_ratio = 0.03;
  std::uint64_t seed = 42;
  int checkpoint_interval = 1;

  /// Throws ConfigError.
  void check() const;
};

/// Decoupled weight decay Adam over the adapter matrices.
class AdamW {
public:
  AdamW(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps) { }

  void step(ToyModel &model, const Gradients &grads, double lr,
            double weight_decay);
  long steps_taken() const { return t_; }

private:
  double beta1_, beta2_, eps_;
  long t_ = 0;
  Gradients m_, v_;
};

struct EpochLog {
  int epoch = 0;
  long step = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double eval_loss = 0.0;
  std::map<std::string, double> metrics;
};

std::string to_jsonl(const EpochLog &log);

using EvalMetrics =
    std::function<std::map<std::string, double>(const ToyModel &, const Dataset &)>;

struct TrainOptions {
  std::optional<std::filesystem::path> checkpoint_dir;
  EvalMetrics eval_metrics;
  /// Called after every epoch, e.g. to stream the log.
  std::function<void(const EpochLog &)> on_epoch;
};

struct TrainResult {
  std::vector<EpochLog> log;
  std::vector<std::filesystem::path> checkpoints;
  long micro_batches = 0;
  long optimizer_steps = 0;
  long total_steps = 0;
  double initial_train_loss = 0.0;
};

/// Optimizer steps happen after every `accumulation_steps` micro-batches
/// (counted across epochs), each micro-batch loss scaled by
/// 1/accumulation_steps. The schedule spans the optimizer steps of the whole
/// run. Checkpoints at every epoch divisible by the interval and at the last.
TrainResult train_toy(ToyModel &model, const Dataset &train,
                      const Dataset &eval, const ToyTrainConfig &cfg,
                      const TrainOptions &options = {});

/// <dir>/epoch-NNN/manifest.json plus one file per matrix:
/// little-endian IEEE-754 float64, row-major.
std::filesystem::path write_checkpoint(const ToyModel &model,
                                       const std::filesystem::path &dir,
                                       int epoch, long step);
/// Restores adapter matrices; shapes must match the model.
void load_checkpoint(ToyModel &model, const std::filesystem::path &epoch_dir);

/// Hyperparameters plus the model shape, as "key = value" lines.
struct DemoConfig {
  ToyTrainConfig train{};
  AdapterSpec adapter{16, 32.0, 0.05, InitScale::kInverseRank};
  std::vector<Target> targets{Target::kQ, Target::kK, Target::kV, Target::kO};
  int d_model = 64;
  long train_samples = 512;
  long eval_samples = 128;

  static DemoConfig parse(std::istream &in);
};

}  // namespace chemeval::lora

#endif  // CHEMEVAL_LORA_TRAINER_H_
