//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_LORA_ADAPTER_H_
#define CHEMEVAL_LORA_ADAPTER_H_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

namespace chemeval::lora {

enum class Target { kQ, kK, kV, kO };

inline constexpr std::array kAllTargets{Target::kQ, Target::kK, Target::kV,
                                        Target::kO};

/// "q_proj", "k_proj", "v_proj", "o_proj".
std::string_view to_string(Target t);
std::optional<Target> target_from_string(std::string_view name);

class RankError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Standard deviation of the normal initializer for A.
enum class InitScale { kInverseRank, kInverseSqrtRank };

struct LoraAdapter {
  Eigen::MatrixXd A;  // r x n
  Eigen::MatrixXd B;  // m x r
  int r = 1;
  double alpha = 1.0;
  double dropout_p = 0.0;
  Target target = Target::kQ;

  int rows() const { return static_cast<int>(B.rows()); }
  int cols() const { return static_cast<int>(A.cols()); }
  double scaling() const { return alpha / r; }
  long trainable_count() const {
    return static_cast<long>(r) * (rows() + cols());
  }
};

/// A ~ N(0, sigma^2) with sigma = 1/r (or 1/sqrt(r)); B = 0.
LoraAdapter init_adapter(int m, int n, int r, double alpha, double dropout_p,
                         std::uint64_t seed, Target target = Target::kQ,
                         InitScale scale = InitScale::kInverseRank);

/// (alpha / r) B A.
Eigen::MatrixXd delta(const LoraAdapter &adapter);

/// W x + (alpha / r) B (A x), without forming the m x n update.
Eigen::VectorXd merged_forward(const Eigen::MatrixXd &W,
                               const LoraAdapter &adapter,
                               const Eigen::VectorXd &x);

}  // namespace chemeval::lora

#endif  // CHEMEVAL_LORA_ADAPTER_H_
