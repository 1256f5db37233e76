#pragma once

#include <cstdint>
#include <random>

namespace aoisim {

// Purpose tags for the independent random substreams of one simulation run.
// Arrival, channel and policy draws never share a generator, so two policies
// run with the same master seed see identical arrival/channel sample paths.
enum class RngPurpose : std::uint64_t {
    Arrivals = 1,
    Channels = 2,
    Policy = 3,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Seeded substream of uniform variates. The uint64 -> double mapping is done
// by hand instead of through <random> distributions, whose output is
// implementation-defined; results must be bit-identical across toolchains.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, RngPurpose purpose) {
        std::uint64_t s = master_seed + static_cast<std::uint64_t>(purpose) * 0x9e3779b97f4a7c15ull;
        splitmix64(s);
        engine_.seed(splitmix64(s));
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool next_bernoulli(double p) { return next_uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace aoisim
