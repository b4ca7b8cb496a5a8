//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_LORA_TOY_MODEL_H_
#define CHEMEVAL_LORA_TOY_MODEL_H_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "chemeval/lora/adapter.h"

namespace chemeval::lora {

/// Column-per-sample design matrix and targets.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;

  long size() const { return static_cast<long>(X.cols()); }
  Dataset slice(const std::vector<long> &columns) const;
};

struct AdapterSpec {
  int r = 16;
  double alpha = 32.0;
  double dropout_p = 0.0;
  InitScale scale = InitScale::kInverseRank;
};

class ToyModel;

/// Gradients of the trainable entries, one (dA, dB) pair per adapter slot.
struct Gradients {
  std::array<Eigen::MatrixXd, 4> dA;
  std::array<Eigen::MatrixXd, 4> dB;

  void set_zero_like(const ToyModel &model);
  Gradients &operator+=(const Gradients &other);
  Gradients &operator*=(double s);
};

/// Two-layer network over four tagged projections:
///   h = tanh(Wq x) * (Wk x) + Wv x,   y = Wo h
/// or, in linear form, y = Wo x. Base matrices are frozen; only the adapters
/// attached to selected projections are trainable.
class ToyModel {
public:
  static ToyModel two_layer(int d_in, int d_hidden, int d_out,
                            std::uint64_t seed);
  static ToyModel linear(int d_in, int d_out, std::uint64_t seed);

  bool is_linear() const { return linear_; }
  bool has(Target t) const { return present_[idx(t)]; }
  const Eigen::MatrixXd &base(Target t) const { return W_[idx(t)]; }
  const std::optional<LoraAdapter> &adapter(Target t) const {
    return adapters_[idx(t)];
  }
  std::optional<LoraAdapter> &adapter(Target t) { return adapters_[idx(t)]; }

  /// Attaches adapters to the given projections (ones the model has).
  void attach(const std::vector<Target> &targets, const AdapterSpec &spec,
              std::uint64_t seed);

  /// Sum of r(m + n) over attached adapters.
  long trainable_count() const;
  /// Sum of m * n over the adapted base matrices.
  long full_finetune_count() const;

  Eigen::MatrixXd forward(const Eigen::MatrixXd &X) const;
  /// 0.5 * mean squared error over all outputs of all samples.
  double loss(const Dataset &d) const;

  /// Loss and gradients for one batch. With an rng, adapter dropout masks are
  /// drawn; without, dropout is off.
  double loss_and_gradients(const Dataset &d, Gradients &grads,
                            std::mt19937_64 *rng = nullptr) const;

  /// Flattened trainable entries (A then B for each slot in q, k, v, o
  /// order) for finite differences and checkpoint comparison.
  std::vector<double *> trainable_entries();

private:
  friend Dataset make_teacher_task(const ToyModel &, int, long, double,
                                   std::uint64_t);

  static std::size_t idx(Target t) { return static_cast<std::size_t>(t); }

  bool linear_ = false;
  std::array<bool, 4> present_{};
  std::array<Eigen::MatrixXd, 4> W_;
  std::array<std::optional<LoraAdapter>, 4> adapters_;
};

/// Teacher = the model's base weights plus a rank-`teacher_rank` shift on
/// the adapted projections, so the task is reachable by the adapters.
Dataset make_teacher_task(const ToyModel &model, int teacher_rank, long n,
                          double noise, std::uint64_t seed);

struct GradientCheck {
  double max_relative_error = 0.0;
  double max_abs_analytic = 0.0;
  double max_abs_numeric = 0.0;
  long entries = 0;
};

/// Central differences on every trainable entry. Relative error is
/// |a - f| / max(|a|, |f|, 1e-3), so vanishing gradients compare absolutely.
/// `tamper`, if set, edits the analytic gradients before comparison.
GradientCheck gradient_check(ToyModel &model, const Dataset &d,
                             double epsilon = 1e-6,
                             void (*tamper)(Gradients &) = nullptr);

}  // namespace chemeval::lora

#endif  // CHEMEVAL_LORA_TOY_MODEL_H_
