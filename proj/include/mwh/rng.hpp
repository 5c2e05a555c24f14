#pragma once

#include <cstdint>
#include <vector>

namespace mwh {

// Deterministic, platform-independent random stream. xoshiro256++ core
// seeded through splitmix64, so the same seed yields the same sequence on
// every platform and in every release of this code.
//
// A training run owns exactly one stream, and consumers draw from it in a
// fixed documented order:
//   * model init: weights layer by layer, row-major
//   * per epoch:  shuffle permutation
//   * per batch:  schedule decision (stage-3 theta only), then lambda,
//                 then pairing permutation, then any operator-specific
//                 draws (CutMix box, flip/crop offsets)
// The stream is single-owner and never shared between threads.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0);

    // Raw 64-bit word.
    std::uint64_t next_u64();

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01();

    // Unbiased uniform integer in [0, bound), bound >= 1. Rejection
    // sampling, no modulo bias.
    std::uint64_t uniform_below(std::uint64_t bound);

    // Standard normal via Box-Muller (two uniforms per draw).
    double normal01();

    // Gamma(alpha, 1) by Marsaglia-Tsang; alpha < 1 uses the
    // G(alpha) = G(alpha+1) * U^(1/alpha) boost. Requires alpha > 0.
    double sample_gamma(double alpha);

    // Beta(alpha, alpha) as G1/(G1+G2). Result strictly inside (0, 1).
    // Throws config_error for alpha <= 0.
    double sample_beta(double alpha);

    // Uniform random permutation of 0..n-1 (Fisher-Yates). n = 0 gives
    // an empty array.
    std::vector<std::size_t> permutation(std::size_t n);

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_[4];
};

} // namespace mwh
