//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_LORA_SCHEDULE_H_
#define CHEMEVAL_LORA_SCHEDULE_H_

#include <stdexcept>

namespace chemeval::lora {

class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Linear ramp from 0 to peak over warmup_ratio * total_steps steps, then
/// half-cosine decay to 0 at total_steps.
double cosine_warmup_lr(long step, long total_steps, double warmup_ratio,
                        double peak_lr);

}  // namespace chemeval::lora

#endif  // CHEMEVAL_LORA_SCHEDULE_H_
