#include "mwh/schedule.hpp"

#include "mwh/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mwh {

void ScheduleParams::validate() const {
    // p == q (empty stage 2) is allowed: the q-sweep grid includes q equal
    // to p, and p = q = 1 degenerates to always-mix.
    if (!(0.0 <= p && p <= q && q <= 1.0))
        throw config_error("schedule: need 0 <= p <= q <= 1, got p=" + std::to_string(p) +
                           " q=" + std::to_string(q));
    if (alpha <= 0.0) throw config_error("schedule: alpha must be > 0");
    if (m < 1) throw config_error("schedule: m must be >= 1");
}

StrategyKind StrategySpec::kind_from_name(const std::string& name) {
    if (name == "baseline") return StrategyKind::Baseline;
    if (name == "mixup") return StrategyKind::MixupAlways;
    if (name == "first_half") return StrategyKind::FirstHalfMixup;
    if (name == "second_half") return StrategyKind::SecondHalfMixup;
    if (name == "refinement") return StrategyKind::MixupWithRefinement;
    if (name == "mwh") return StrategyKind::Mwh;
    if (name == "stage_combo") return StrategyKind::StageCombo;
    throw config_error("unknown strategy: " + name);
}

std::string StrategySpec::kind_name(StrategyKind k) {
    switch (k) {
    case StrategyKind::Baseline: return "baseline";
    case StrategyKind::MixupAlways: return "mixup";
    case StrategyKind::FirstHalfMixup: return "first_half";
    case StrategyKind::SecondHalfMixup: return "second_half";
    case StrategyKind::MixupWithRefinement: return "refinement";
    case StrategyKind::Mwh: return "mwh";
    case StrategyKind::StageCombo: return "stage_combo";
    }
    throw config_error("unknown strategy kind");
}

Policy StrategySpec::policy_from_name(const std::string& name) {
    if (name == "clean") return Policy::Clean;
    if (name == "mixup") return Policy::Mixup;
    if (name == "mwh") return Policy::Mwh;
    throw config_error("unknown stage policy: " + name + " (want clean|mixup|mwh)");
}

namespace schedule {

namespace {

std::size_t floor_frac(double frac, std::size_t m) {
    return static_cast<std::size_t>(std::floor(frac * static_cast<double>(m)));
}

} // namespace

std::size_t stage1_count(const ScheduleParams& params) {
    return floor_frac(params.p, params.m);
}

std::size_t stage2_count(const ScheduleParams& params) {
    return floor_frac(params.q, params.m) - floor_frac(params.p, params.m);
}

std::size_t stage2_mixed_count(const ScheduleParams& params) {
    // Even indices in (floor(pm), floor(qm)]: evens up to b minus evens up to a.
    const std::size_t a = floor_frac(params.p, params.m);
    const std::size_t b = floor_frac(params.q, params.m);
    return b / 2 - a / 2;
}

int stage_of(std::size_t i, const ScheduleParams& params) {
    params.validate();
    if (i < 1 || i > params.m)
        throw config_error("stage_of: batch index " + std::to_string(i) + " outside [1, " +
                           std::to_string(params.m) + "]");
    if (i <= floor_frac(params.p, params.m)) return 1;
    if (i <= floor_frac(params.q, params.m)) return 2;
    return 3;
}

double epsilon_at(std::size_t i, const ScheduleParams& params) {
    const double eps = (static_cast<double>(params.m) - static_cast<double>(i)) /
                       (static_cast<double>(params.m) * (1.0 - params.q));
    return std::clamp(eps, 0.0, 1.0);
}

AugDecision mwh_decide(std::size_t i, const ScheduleParams& params, RngStream& stream) {
    AugDecision d;
    d.stage = stage_of(i, params);
    switch (d.stage) {
    case 1:
        d.mix = true;
        break;
    case 2:
        d.mix = (i % 2 == 0); // parity on the global batch index
        break;
    default: {
        d.epsilon = epsilon_at(i, params);
        const double theta = stream.uniform01(); // drawn even when epsilon is 0
        d.mix = theta < *d.epsilon;
        break;
    }
    }
    return d;
}

AugDecision strategy_decide(std::size_t i, const StrategySpec& spec, std::size_t m,
                            RngStream& stream) {
    if (i < 1) throw config_error("strategy_decide: batch index must be >= 1");
    const bool past_main = i > m;
    if (past_main && spec.kind != StrategyKind::MixupWithRefinement)
        throw config_error("strategy_decide: batch index " + std::to_string(i) +
                           " beyond m=" + std::to_string(m));

    AugDecision d;
    switch (spec.kind) {
    case StrategyKind::Baseline:
        d.mix = false;
        return d;
    case StrategyKind::MixupAlways:
        d.mix = true;
        return d;
    case StrategyKind::FirstHalfMixup:
        d.mix = i <= m / 2;
        return d;
    case StrategyKind::SecondHalfMixup:
        d.mix = i > m / 2;
        return d;
    case StrategyKind::MixupWithRefinement:
        d.mix = !past_main;
        return d;
    case StrategyKind::Mwh: {
        ScheduleParams p = spec.params;
        p.m = m;
        return mwh_decide(i, p, stream);
    }
    case StrategyKind::StageCombo: {
        ScheduleParams p = spec.params;
        p.m = m;
        d.stage = stage_of(i, p);
        const Policy pol = d.stage == 1 ? Policy::Mixup
                         : d.stage == 2 ? spec.stage2
                                        : spec.stage3;
        switch (pol) {
        case Policy::Clean:
            d.mix = false;
            break;
        case Policy::Mixup:
            d.mix = true;
            break;
        case Policy::Mwh:
            if (d.stage == 2) {
                d.mix = (i % 2 == 0);
            } else if (d.stage == 3) {
                d.epsilon = epsilon_at(i, p);
                d.mix = stream.uniform01() < *d.epsilon;
            } else {
                d.mix = true;
            }
            break;
        }
        return d;
    }
    }
    throw config_error("strategy_decide: unknown strategy variant");
}

} // namespace schedule

} // namespace mwh
