#include "mwh/rng.hpp"

#include "mwh/errors.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace mwh {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& s : state_) s = splitmix64(sm);
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
    if (bound == 0) throw config_error("uniform_below: bound must be >= 1");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold) return r % bound;
    }
}

double RngStream::normal01() {
    // 1 - uniform01() is in (0, 1], keeping the log finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

double RngStream::sample_gamma(double alpha) {
    if (!(alpha > 0.0)) throw config_error("sample_gamma: alpha must be > 0");
    if (alpha < 1.0) {
        const double g = sample_gamma(alpha + 1.0);
        const double u = 1.0 - uniform01();
        return g * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal01();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

double RngStream::sample_beta(double alpha) {
    if (!(alpha > 0.0)) throw config_error("sample_beta: alpha must be > 0");
    // Tiny alpha can underflow both gamma draws; the floor keeps the ratio
    // defined and the result strictly inside (0, 1).
    constexpr double kFloor = 1e-300;
    const double g1 = std::max(sample_gamma(alpha), kFloor);
    const double g2 = std::max(sample_gamma(alpha), kFloor);
    double lambda = g1 / (g1 + g2);
    if (lambda <= 0.0) lambda = kFloor;
    if (lambda >= 1.0) lambda = 1.0 - 0x1.0p-53;
    return lambda;
}

std::vector<std::size_t> RngStream::permutation(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

} // namespace mwh
