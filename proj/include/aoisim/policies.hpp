#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aoisim/analysis.hpp"
#include "aoisim/model.hpp"

namespace aoisim {

// What a policy may look at for one stream: the destination age, and the
// head-of-line system time when a packet is present.
struct StreamObservation {
    std::int64_t aoi = 0;
    std::optional<std::int64_t> system_time; // present iff the queue is non-empty
};

// Scheduling policy. Naive is the fixed uniform split mu_i = 1/N and behaves
// exactly like a stationary randomized policy with that spec.
struct Policy {
    enum class Kind { StationaryRandomized, MaxWeight, Naive };

    Kind kind = Kind::Naive;
    RandomizedPolicySpec spec; // StationaryRandomized / Naive
    std::vector<double> beta;  // MaxWeight, all entries > 0

    static Policy stationary_randomized(RandomizedPolicySpec spec);
    static Policy max_weight(std::vector<double> beta);
    static Policy naive(int n_streams);

    // Throws std::invalid_argument if the policy does not fit the config.
    void validate(const NetworkConfig& config) const;
    std::string describe() const;
};

// One scheduling decision. Randomized policies map the uniform draw to a
// stream via cumulative probabilities and ignore the state entirely (the
// simulator idles if the pick has an empty queue). Max-Weight picks the
// non-empty stream maximizing beta_i * p_i * (aoi_i - system_time_i) and
// returns nothing only when every queue is empty. Ties go to the lowest
// index, so decision sequences are reproducible.
std::optional<int> decide(const Policy& policy, const NetworkConfig& config,
                          std::span<const StreamObservation> observations, double uniform_draw);

// Max-Weight tuning used throughout: beta_i = w_i / (p_i * mu_i) with mu the
// optimal randomized spec of the discipline. Propagates InfeasibilityError
// for FIFO configs outside the tightened stability region.
std::vector<double> default_beta(const NetworkConfig& config, QueueDiscipline discipline,
                                 double fifo_delta = 1e-6);

} // namespace aoisim
