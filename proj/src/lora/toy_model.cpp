//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/lora/toy_model.h"

#include <algorithm>
#include <cmath>

namespace chemeval::lora {

namespace {

Eigen::MatrixXd gaussian(int rows, int cols, double sigma, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, sigma);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i)
      m(i, j) = normal(rng);
  return m;
}

/// Input columns as seen by an adapter: inverted dropout, or the input as is.
Eigen::MatrixXd adapter_input(const LoraAdapter &a, const Eigen::MatrixXd &X,
                              std::mt19937_64 *rng, Eigen::MatrixXd *mask) {
  if (rng == nullptr || a.dropout_p == 0.0) {
    if (mask)
      *mask = Eigen::MatrixXd::Ones(X.rows(), X.cols());
    return X;
  }
  std::bernoulli_distribution keep(1.0 - a.dropout_p);
  Eigen::MatrixXd m(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      m(i, j) = keep(*rng) ? 1.0 / (1.0 - a.dropout_p) : 0.0;
  if (mask)
    *mask = m;
  return X.cwiseProduct(m);
}

struct ProjectionCache {
  Eigen::MatrixXd Xd;    // adapter input after dropout
  Eigen::MatrixXd mask;  // dropout scaling per input entry
};

Eigen::MatrixXd project(const Eigen::MatrixXd &W,
                        const std::optional<LoraAdapter> &a,
                        const Eigen::MatrixXd &X, std::mt19937_64 *rng,
                        ProjectionCache *cache) {
  Eigen::MatrixXd out = W * X;
  if (!a)
    return out;
  Eigen::MatrixXd mask;
  Eigen::MatrixXd Xd = adapter_input(*a, X, rng, &mask);
  out += a->scaling() * (a->B * (a->A * Xd));
  if (cache) {
    cache->Xd = std::move(Xd);
    cache->mask = std::move(mask);
  }
  return out;
}

/// Accumulates adapter gradients for dOut and returns d(loss)/d(input).
Eigen::MatrixXd project_backward(const Eigen::MatrixXd &W,
                                 const std::optional<LoraAdapter> &a,
                                 const ProjectionCache &cache,
                                 const Eigen::MatrixXd &dOut,
                                 Eigen::MatrixXd &dA, Eigen::MatrixXd &dB) {
  Eigen::MatrixXd dX = W.transpose() * dOut;
  if (!a)
    return dX;
  const double s = a->scaling();
  const Eigen::MatrixXd Bt_dOut = a->B.transpose() * dOut;
  dB += s * dOut * (a->A * cache.Xd).transpose();
  dA += s * Bt_dOut * cache.Xd.transpose();
  dX += (s * (a->A.transpose() * Bt_dOut)).cwiseProduct(cache.mask);
  return dX;
}

}  // namespace

Dataset Dataset::slice(const std::vector<long> &columns) const {
  Dataset out;
  out.X.resize(X.rows(), static_cast<Eigen::Index>(columns.size()));
  out.Y.resize(Y.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    out.X.col(static_cast<Eigen::Index>(k)) = X.col(columns[k]);
    out.Y.col(static_cast<Eigen::Index>(k)) = Y.col(columns[k]);
  }
  return out;
}

void Gradients::set_zero_like(const ToyModel &model) {
  for (auto t : kAllTargets) {
    const auto k = static_cast<std::size_t>(t);
    if (const auto &a = model.adapter(t)) {
      dA[k] = Eigen::MatrixXd::Zero(a->A.rows(), a->A.cols());
      dB[k] = Eigen::MatrixXd::Zero(a->B.rows(), a->B.cols());
    } else {
      dA[k].resize(0, 0);
      dB[k].resize(0, 0);
    }
  }
}

Gradients &Gradients::operator+=(const Gradients &other) {
  for (std::size_t k = 0; k < 4; ++k) {
    if (dA[k].size() == 0)
      continue;
    dA[k] += other.dA[k];
    dB[k] += other.dB[k];
  }
  return *this;
}

Gradients &Gradients::operator*=(double s) {
  for (std::size_t k = 0; k < 4; ++k) {
    dA[k] *= s;
    dB[k] *= s;
  }
  return *this;
}

ToyModel ToyModel::two_layer(int d_in, int d_hidden, int d_out,
                             std::uint64_t seed) {
  if (d_in < 1 || d_hidden < 1 || d_out < 1)
    throw ShapeError("toy model dimensions must be positive");
  ToyModel m;
  std::mt19937_64 rng(seed);
  const double s_in = 1.0 / std::sqrt(static_cast<double>(d_in));
  const double s_hidden = 1.0 / std::sqrt(static_cast<double>(d_hidden));
  for (auto t : {Target::kQ, Target::kK, Target::kV}) {
    m.W_[idx(t)] = gaussian(d_hidden, d_in, s_in, rng);
    m.present_[idx(t)] = true;
  }
  m.W_[idx(Target::kO)] = gaussian(d_out, d_hidden, s_hidden, rng);
  m.present_[idx(Target::kO)] = true;
  return m;
}

ToyModel ToyModel::linear(int d_in, int d_out, std::uint64_t seed) {
  if (d_in < 1 || d_out < 1)
    throw ShapeError("toy model dimensions must be positive");
  ToyModel m;
  m.linear_ = true;
  std::mt19937_64 rng(seed);
  m.W_[idx(Target::kO)] =
      gaussian(d_out, d_in, 1.0 / std::sqrt(static_cast<double>(d_in)), rng);
  m.present_[idx(Target::kO)] = true;
  return m;
}

void ToyModel::attach(const std::vector<Target> &targets,
                      const AdapterSpec &spec, std::uint64_t seed) {
  for (auto t : targets) {
    if (!has(t))
      throw ShapeError("model has no " + std::string(to_string(t)) +
                       " projection");
    const auto &W = W_[idx(t)];
    adapters_[idx(t)] = init_adapter(
        static_cast<int>(W.rows()), static_cast<int>(W.cols()), spec.r,
        spec.alpha, spec.dropout_p, seed + 1 + idx(t), t, spec.scale);
  }
}

long ToyModel::trainable_count() const {
  long n = 0;
  for (const auto &a : adapters_)
    if (a)
      n += a->trainable_count();
  return n;
}

long ToyModel::full_finetune_count() const {
  long n = 0;
  for (auto t : kAllTargets)
    if (adapters_[idx(t)])
      n += static_cast<long>(W_[idx(t)].size());
  return n;
}

Eigen::MatrixXd ToyModel::forward(const Eigen::MatrixXd &X) const {
  const auto o = idx(Target::kO);
  if (linear_) {
    if (X.rows() != W_[o].cols())
      throw ShapeError("input has the wrong dimension");
    return project(W_[o], adapters_[o], X, nullptr, nullptr);
  }
  if (X.rows() != W_[0].cols())
    throw ShapeError("input has the wrong dimension");
  const Eigen::MatrixXd Q = project(W_[0], adapters_[0], X, nullptr, nullptr);
  const Eigen::MatrixXd K = project(W_[1], adapters_[1], X, nullptr, nullptr);
  const Eigen::MatrixXd V = project(W_[2], adapters_[2], X, nullptr, nullptr);
  const Eigen::MatrixXd H = Q.array().tanh().matrix().cwiseProduct(K) + V;
  return project(W_[o], adapters_[o], H, nullptr, nullptr);
}

double ToyModel::loss(const Dataset &d) const {
  if (d.size() == 0)
    return 0.0;
  return 0.5 * (forward(d.X) - d.Y).squaredNorm() / static_cast<double>(d.Y.size());
}

double ToyModel::loss_and_gradients(const Dataset &d, Gradients &grads,
                                    std::mt19937_64 *rng) const {
  grads.set_zero_like(*this);
  if (d.size() == 0)
    return 0.0;
  const double inv_n = 1.0 / static_cast<double>(d.Y.size());
  const auto o = idx(Target::kO);
  std::array<ProjectionCache, 4> cache;

  if (linear_) {
    const Eigen::MatrixXd Y = project(W_[o], adapters_[o], d.X, rng, &cache[o]);
    const Eigen::MatrixXd dY = (Y - d.Y) * inv_n;
    project_backward(W_[o], adapters_[o], cache[o], dY, grads.dA[o], grads.dB[o]);
    return 0.5 * (Y - d.Y).squaredNorm() * inv_n;
  }

  const Eigen::MatrixXd Q = project(W_[0], adapters_[0], d.X, rng, &cache[0]);
  const Eigen::MatrixXd K = project(W_[1], adapters_[1], d.X, rng, &cache[1]);
  const Eigen::MatrixXd V = project(W_[2], adapters_[2], d.X, rng, &cache[2]);
  const Eigen::MatrixXd T = Q.array().tanh().matrix();
  const Eigen::MatrixXd H = T.cwiseProduct(K) + V;
  const Eigen::MatrixXd Y = project(W_[o], adapters_[o], H, rng, &cache[o]);

  const Eigen::MatrixXd dY = (Y - d.Y) * inv_n;
  const Eigen::MatrixXd dH =
      project_backward(W_[o], adapters_[o], cache[o], dY, grads.dA[o], grads.dB[o]);
  const Eigen::MatrixXd dQ =
      dH.cwiseProduct(K).cwiseProduct((1.0 - T.array().square()).matrix());
  const Eigen::MatrixXd dK = dH.cwiseProduct(T);
  project_backward(W_[0], adapters_[0], cache[0], dQ, grads.dA[0], grads.dB[0]);
  project_backward(W_[1], adapters_[1], cache[1], dK, grads.dA[1], grads.dB[1]);
  project_backward(W_[2], adapters_[2], cache[2], dH, grads.dA[2], grads.dB[2]);
  return 0.5 * (Y - d.Y).squaredNorm() * inv_n;
}

std::vector<double *> ToyModel::trainable_entries() {
  std::vector<double *> out;
  for (auto &a : adapters_) {
    if (!a)
      continue;
    for (Eigen::Index k = 0; k < a->A.size(); ++k)
      out.push_back(a->A.data() + k);
    for (Eigen::Index k = 0; k < a->B.size(); ++k)
      out.push_back(a->B.data() + k);
  }
  return out;
}

Dataset make_teacher_task(const ToyModel &model, int teacher_rank, long n,
                          double noise, std::uint64_t seed) {
  ToyModel teacher = model;
  std::mt19937_64 rng(seed);
  for (auto t : kAllTargets) {
    const auto k = ToyModel::idx(t);
    if (!teacher.adapters_[k])
      continue;
    auto &W = teacher.W_[k];
    const int r = std::min<int>(teacher_rank, static_cast<int>(std::min(W.rows(), W.cols())));
    W += gaussian(static_cast<int>(W.rows()), r,
                  1.0 / std::sqrt(static_cast<double>(r)), rng) *
         gaussian(r, static_cast<int>(W.cols()),
                  1.0 / std::sqrt(static_cast<double>(W.cols())), rng);
    teacher.adapters_[k].reset();
  }
  Dataset d;
  const int d_in = static_cast<int>(
      model.is_linear() ? model.base(Target::kO).cols() : model.base(Target::kQ).cols());
  d.X = gaussian(d_in, static_cast<int>(n), 1.0, rng);
  d.Y = teacher.forward(d.X);
  if (noise > 0.0)
    d.Y += gaussian(static_cast<int>(d.Y.rows()), static_cast<int>(n), noise, rng);
  return d;
}

GradientCheck gradient_check(ToyModel &model, const Dataset &d, double epsilon,
                             void (*tamper)(Gradients &)) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3))
    throw std::invalid_argument("gradient_check: epsilon must be in [1e-7, 1e-3]");
  Gradients grads;
  model.loss_and_gradients(d, grads);
  if (tamper)
    tamper(grads);

  std::vector<double> analytic;
  for (auto t : kAllTargets) {
    const auto k = static_cast<std::size_t>(t);
    if (!model.adapter(t))
      continue;
    analytic.insert(analytic.end(), grads.dA[k].data(),
                    grads.dA[k].data() + grads.dA[k].size());
    analytic.insert(analytic.end(), grads.dB[k].data(),
                    grads.dB[k].data() + grads.dB[k].size());
  }

  GradientCheck out;
  const auto entries = model.trainable_entries();
  out.entries = static_cast<long>(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    double *p = entries[k];
    const double saved = *p;
    *p = saved + epsilon;
    const double up = model.loss(d);
    *p = saved - epsilon;
    const double down = model.loss(d);
    *p = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double a = analytic[k];
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-3});
    out.max_relative_error =
        std::max(out.max_relative_error, std::abs(a - numeric) / denom);
    out.max_abs_analytic = std::max(out.max_abs_analytic, std::abs(a));
    out.max_abs_numeric = std::max(out.max_abs_numeric, std::abs(numeric));
  }
  return out;
}

}  // namespace chemeval::lora
