//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/lora/schedule.h"

#include <cmath>
#include <numbers>
#include <string>

namespace chemeval::lora {

double cosine_warmup_lr(long step, long total_steps, double warmup_ratio,
                        double peak_lr) {
  if (total_steps < 1)
    throw DomainError("total_steps must be at least 1");
  if (step < 0 || step > total_steps)
    throw DomainError("step " + std::to_string(step) + " outside [0, " +
                      std::to_string(total_steps) + "]");
  if (!(warmup_ratio >= 0.0 && warmup_ratio < 1.0))
    throw DomainError("warmup_ratio must be in [0, 1)");

  const double t = static_cast<double>(step);
  const double warmup = warmup_ratio * static_cast<double>(total_steps);
  if (t < warmup)
    return peak_lr * t / warmup;
  const double progress = (t - warmup) / (static_cast<double>(total_steps) - warmup);
  return peak_lr * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

}  // namespace chemeval::lora
