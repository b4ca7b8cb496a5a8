//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/lora/adapter.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace chemeval::lora {

std::string_view to_string(Target t) {
  switch (t) {
  case Target::kQ: return "q_proj";
  case Target::kK: return "k_proj";
  case Target::kV: return "v_proj";
  case Target::kO: return "o_proj";
  }
  return "";
}

std::optional<Target> target_from_string(std::string_view name) {
  for (auto t : kAllTargets)
    if (to_string(t) == name || to_string(t).substr(0, 1) == name)
      return t;
  return std::nullopt;
}

LoraAdapter init_adapter(int m, int n, int r, double alpha, double dropout_p,
                         std::uint64_t seed, Target target, InitScale scale) {
  if (m < 1 || n < 1)
    throw ShapeError("adapter dimensions must be positive");
  if (r < 1 || r > std::min(m, n))
    throw RankError("rank " + std::to_string(r) + " outside [1, min(" +
                    std::to_string(m) + ", " + std::to_string(n) + ")]");
  if (!(dropout_p >= 0.0 && dropout_p < 1.0))
    throw std::invalid_argument("dropout probability must be in [0, 1)");

  LoraAdapter a;
  a.r = r;
  a.alpha = alpha;
  a.dropout_p = dropout_p;
  a.target = target;
  const double sigma = scale == InitScale::kInverseRank
                           ? 1.0 / r
                           : 1.0 / std::sqrt(static_cast<double>(r));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  a.A.resize(r, n);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < n; ++j)
      a.A(i, j) = normal(rng);
  a.B = Eigen::MatrixXd::Zero(m, r);
  return a;
}

Eigen::MatrixXd delta(const LoraAdapter &adapter) {
  return adapter.scaling() * (adapter.B * adapter.A);
}

Eigen::VectorXd merged_forward(const Eigen::MatrixXd &W,
                               const LoraAdapter &adapter,
                               const Eigen::VectorXd &x) {
  if (W.rows() != adapter.rows() || W.cols() != adapter.cols() ||
      x.size() != W.cols())
    throw ShapeError("merged_forward: W is " + std::to_string(W.rows()) + "x" +
                     std::to_string(W.cols()) + ", adapter " +
                     std::to_string(adapter.rows()) + "x" +
                     std::to_string(adapter.cols()) + ", x has " +
                     std::to_string(x.size()) + " entries");
  return W * x + adapter.scaling() * (adapter.B * (adapter.A * x));
}

}  // namespace chemeval::lora
