#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoisim/model.hpp"

namespace aoisim::verify {

enum class Depth { Quick, Full };

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail; // observed vs expected on failure, short summary otherwise
};

// Cross-validation suite: closed forms against independent grid searches and
// finite differences, the chain oracle against its closed form, the exact
// sample-path age identity on random runs, and the simulated policy
// orderings. Quick keeps every simulation short; Full uses the long-horizon
// settings.
std::vector<CheckResult> run_all(Depth depth);

// Benchmark instances used across the suite: four streams with weights
// (4,4,1,1), reliabilities i/4 and arrival rates (1, .75, .5, .25) * lambda;
// and two streams with weights (1,1), reliabilities (1/3, 1), arrival rates
// (1, 1/3) * lambda.
NetworkConfig reference_net4(double lambda, std::int64_t horizon, std::uint64_t seed);
NetworkConfig reference_net2(double lambda, std::int64_t horizon, std::uint64_t seed);

} // namespace aoisim::verify
