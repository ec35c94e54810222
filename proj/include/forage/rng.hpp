#pragma once

#include <cstdint>
#include <random>

namespace forage {

/// 64-bit Mersenne Twister with distribution code written out by hand so
/// streams are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Independent stream for (seed, stream id), e.g. one per robot.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace forage
