#include "mwh/optim.hpp"

#include "mwh/errors.hpp"

#include <cmath>

namespace mwh {

void LrSchedule::validate() const {
    for (std::size_t i = 1; i < milestones.size(); ++i)
        if (milestones[i] <= milestones[i - 1])
            throw config_error("lr schedule: milestones must be strictly increasing");
    if (base_lr <= 0.0) throw config_error("lr schedule: base lr must be > 0");
    if (total_epochs < 1) throw config_error("lr schedule: total epochs must be >= 1");
}

namespace optim {

namespace {

void ensure_buffers(std::vector<Matrix>& buf, const std::vector<Matrix>& like) {
    if (buf.empty()) {
        for (const auto& m : like) buf.emplace_back(m.rows(), m.cols());
    }
    if (buf.size() != like.size()) throw numeric_error("optimizer: buffer count mismatch");
    for (std::size_t i = 0; i < buf.size(); ++i)
        if (!buf[i].same_shape(like[i]))
            throw numeric_error("optimizer: buffer shape mismatch");
}

void adam_update_tensor(Matrix& p, const Matrix& g, Matrix& m, Matrix& v, double lr,
                        double beta1, double beta2, double eps, double bc1, double bc2) {
    if (!p.same_shape(g)) throw numeric_error("adam: gradient shape mismatch");
    const std::size_t n = p.size();
#pragma omp parallel for schedule(static) if (n >= 16384)
    for (std::size_t i = 0; i < n; ++i) {
        const double gi = g.data()[i];
        m.data()[i] = beta1 * m.data()[i] + (1.0 - beta1) * gi;
        v.data()[i] = beta2 * v.data()[i] + (1.0 - beta2) * gi * gi;
        const double m_hat = m.data()[i] / bc1;
        const double v_hat = v.data()[i] / bc2;
        p.data()[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
}

void sgd_update_tensor(Matrix& p, const Matrix& g, Matrix& vel, double lr, double momentum) {
    if (!p.same_shape(g)) throw numeric_error("sgd: gradient shape mismatch");
    const std::size_t n = p.size();
#pragma omp parallel for schedule(static) if (n >= 16384)
    for (std::size_t i = 0; i < n; ++i) {
        vel.data()[i] = momentum * vel.data()[i] + g.data()[i];
        p.data()[i] -= lr * vel.data()[i];
    }
}

} // namespace

void adam_step(AdamState& state, MlpState& params, const Gradients& grads, double lr_override) {
    ensure_buffers(state.m_w, params.weights);
    ensure_buffers(state.v_w, params.weights);
    ensure_buffers(state.m_b, params.biases);
    ensure_buffers(state.v_b, params.biases);
    state.t += 1;
    const double lr = lr_override >= 0.0 ? lr_override : state.lr;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        adam_update_tensor(params.weights[l], grads.weights[l], state.m_w[l], state.v_w[l], lr,
                           state.beta1, state.beta2, state.eps, bc1, bc2);
        adam_update_tensor(params.biases[l], grads.biases[l], state.m_b[l], state.v_b[l], lr,
                           state.beta1, state.beta2, state.eps, bc1, bc2);
    }
}

void sgd_step(SgdState& state, MlpState& params, const Gradients& grads, double lr_override) {
    ensure_buffers(state.vel_w, params.weights);
    ensure_buffers(state.vel_b, params.biases);
    const double lr = lr_override >= 0.0 ? lr_override : state.lr;
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        sgd_update_tensor(params.weights[l], grads.weights[l], state.vel_w[l], lr,
                          state.momentum);
        sgd_update_tensor(params.biases[l], grads.biases[l], state.vel_b[l], lr, state.momentum);
    }
}

double lr_at(const LrSchedule& schedule, std::size_t epoch) {
    schedule.validate();
    switch (schedule.kind) {
    case LrScheduleKind::Constant:
        return schedule.base_lr;
    case LrScheduleKind::StepDecay: {
        double lr = schedule.base_lr;
        for (std::size_t ms : schedule.milestones)
            if (epoch >= ms) lr *= schedule.factor;
        return lr;
    }
    case LrScheduleKind::Cosine:
        return 0.5 * schedule.base_lr *
               (1.0 + std::cos(3.14159265358979323846 * static_cast<double>(epoch) /
                               static_cast<double>(schedule.total_epochs)));
    }
    throw config_error("unknown lr schedule kind");
}

LrScheduleKind schedule_kind_from_name(const std::string& name) {
    if (name == "constant") return LrScheduleKind::Constant;
    if (name == "step") return LrScheduleKind::StepDecay;
    if (name == "cosine") return LrScheduleKind::Cosine;
    throw config_error("unknown lr schedule: " + name + " (want constant|step|cosine)");
}

} // namespace optim

} // namespace mwh
