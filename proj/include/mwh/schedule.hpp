#pragma once

#include "mwh/rng.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace mwh {

// Three-stage schedule parameters. The run is m mini-batches long; p and q
// split it into an always-mix stage, an alternating stage and an
// epsilon-greedy tail.
struct ScheduleParams {
    double p = 0.6;
    double q = 0.9;
    double alpha = 0.2;
    std::size_t m = 1;

    // Enforces 0 <= p < q <= 1 and m >= 1; throws config_error.
    void validate() const;
};

// Per-stage policy for the StageCombo ablation grid. Stage 1 is always
// Mixup; stages 2 and 3 each get one of these.
enum class Policy { Clean, Mixup, Mwh };

enum class StrategyKind {
    Baseline,        // never mix
    MixupAlways,     // mix every batch
    FirstHalfMixup,  // mix iff i <= floor(m/2)
    SecondHalfMixup, // mix iff i > floor(m/2)
    MixupWithRefinement, // mix for the main m batches, clean afterwards
    Mwh,             // the three-stage schedule
    StageCombo,      // stage 1 mix; stages 2/3 per policy, mWh boundaries
};

struct StrategySpec {
    StrategyKind kind = StrategyKind::Mwh;
    ScheduleParams params;             // used by Mwh and StageCombo
    std::size_t refine_epochs = 0;     // MixupWithRefinement only
    Policy stage2 = Policy::Mwh;       // StageCombo only
    Policy stage3 = Policy::Mwh;       // StageCombo only

    static StrategyKind kind_from_name(const std::string& name);
    static std::string kind_name(StrategyKind k);
    static Policy policy_from_name(const std::string& name);
};

// Outcome of one per-batch decision. stage is meaningful for the staged
// strategies (Mwh, StageCombo); the flat strategies report stage 1.
// epsilon is present exactly when the decision came from a stage-3
// epsilon-greedy draw.
struct AugDecision {
    bool mix = false;
    int stage = 1;
    std::optional<double> epsilon;
};

namespace schedule {

// Stage of batch i (1-based): 1 iff i <= floor(p*m), 2 iff
// floor(p*m) < i <= floor(q*m), else 3. Throws on i out of [1, m].
int stage_of(std::size_t i, const ScheduleParams& params);

// Stage-1 batch count, i.e. floor(p*m).
std::size_t stage1_count(const ScheduleParams& params);
// Stage-2 batch count, i.e. floor(q*m) - floor(p*m).
std::size_t stage2_count(const ScheduleParams& params);
// Number of even global indices in the stage-2 range (the batches the
// parity rule mixes), in closed form.
std::size_t stage2_mixed_count(const ScheduleParams& params);

// Exploration rate (m - i) / (m * (1 - q)), clamped to [0, 1]. Only
// meaningful in stage 3; decreases linearly to 0 at i = m.
double epsilon_at(std::size_t i, const ScheduleParams& params);

// One Algorithm-1 decision: stage 1 mixes, stage 2 mixes on even global
// indices, stage 3 mixes when theta < epsilon. The stage-3 theta draw
// happens even at epsilon = 0 so the stream position stays fixed.
AugDecision mwh_decide(std::size_t i, const ScheduleParams& params, RngStream& stream);

// Decision under any strategy variant. m is the main-phase batch count;
// only MixupWithRefinement accepts i > m (the appended clean batches).
AugDecision strategy_decide(std::size_t i, const StrategySpec& spec, std::size_t m,
                            RngStream& stream);

} // namespace schedule

} // namespace mwh
