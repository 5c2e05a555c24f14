#pragma once

#include "mwh/model.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace mwh {

// Kingma & Ba defaults.
struct AdamState {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::size_t t = 0;
    std::vector<Matrix> m_w, v_w;
    std::vector<Matrix> m_b, v_b;
};

struct SgdState {
    double lr = 0.1;
    double momentum = 0.9;
    std::vector<Matrix> vel_w, vel_b;
};

enum class LrScheduleKind { Constant, StepDecay, Cosine };

struct LrSchedule {
    LrScheduleKind kind = LrScheduleKind::Constant;
    double base_lr = 0.001;
    std::vector<std::size_t> milestones; // StepDecay, strictly increasing epochs
    double factor = 0.1;                 // StepDecay multiplier per milestone passed
    std::size_t total_epochs = 1;        // Cosine horizon

    void validate() const;
};

namespace optim {

// Bias-corrected Adam update, in place. lr_override < 0 keeps state.lr.
void adam_step(AdamState& state, MlpState& params, const Gradients& grads,
               double lr_override = -1.0);

// v <- momentum*v + g; p <- p - lr*v.
void sgd_step(SgdState& state, MlpState& params, const Gradients& grads,
              double lr_override = -1.0);

// Learning rate at a 0-based epoch. StepDecay multiplies the base by
// factor once per milestone already reached (epoch >= milestone); Cosine
// is 0.5*base*(1 + cos(pi*epoch/total)).
double lr_at(const LrSchedule& schedule, std::size_t epoch);

LrScheduleKind schedule_kind_from_name(const std::string& name);

} // namespace optim

} // namespace mwh
