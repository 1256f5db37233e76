#include "aoisim/policies.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace aoisim {

Policy Policy::stationary_randomized(RandomizedPolicySpec spec) {
    Policy p;
    p.kind = Kind::StationaryRandomized;
    p.spec = std::move(spec);
    return p;
}

Policy Policy::max_weight(std::vector<double> beta) {
    Policy p;
    p.kind = Kind::MaxWeight;
    p.beta = std::move(beta);
    return p;
}

Policy Policy::naive(int n_streams) {
    Policy p;
    p.kind = Kind::Naive;
    p.spec.mu.assign(static_cast<std::size_t>(n_streams), 1.0 / n_streams);
    return p;
}

void Policy::validate(const NetworkConfig& config) const {
    const auto n = static_cast<std::size_t>(config.n_streams);
    switch (kind) {
    case Kind::StationaryRandomized:
    case Kind::Naive:
        spec.validate();
        if (spec.mu.size() != n)
            throw std::invalid_argument("policy spec size does not match n_streams");
        break;
    case Kind::MaxWeight:
        if (beta.size() != n)
            throw std::invalid_argument("beta size does not match n_streams");
        for (std::size_t i = 0; i < beta.size(); ++i) {
            if (!std::isfinite(beta[i]) || beta[i] <= 0.0)
                throw std::invalid_argument("beta[" + std::to_string(i) + "] must be > 0");
        }
        break;
    }
}

std::string Policy::describe() const {
    switch (kind) {
    case Kind::StationaryRandomized: return "randomized";
    case Kind::MaxWeight: return "max-weight";
    case Kind::Naive: return "naive";
    }
    return "?";
}

std::optional<int> decide(const Policy& policy, const NetworkConfig& config,
                          std::span<const StreamObservation> observations, double uniform_draw) {
    const int n = config.n_streams;
    assert(static_cast<int>(observations.size()) == n);

    if (policy.kind == Policy::Kind::MaxWeight) {
        int best = -1;
        double best_reward = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!observations[i].system_time.has_value()) continue;
            const double age_drop =
                static_cast<double>(observations[i].aoi - *observations[i].system_time);
            const double reward = policy.beta[i] * config.channel_reliability[i] * age_drop;
            if (best < 0 || reward > best_reward) {
                best = i;
                best_reward = reward;
            }
        }
        if (best < 0) return std::nullopt; // idles only when all queues are empty
        return best;
    }

    // Randomized / naive: state-oblivious pick from fixed probabilities;
    // leftover mass idles.
    double cumulative = 0.0;
    for (int i = 0; i < n; ++i) {
        cumulative += policy.spec.mu[i];
        if (uniform_draw < cumulative) return i;
    }
    return std::nullopt;
}

std::vector<double> default_beta(const NetworkConfig& config, QueueDiscipline discipline,
                                 double fifo_delta) {
    RandomizedPolicySpec spec;
    switch (discipline) {
    case QueueDiscipline::SinglePacket: spec = mu_single(config); break;
    case QueueDiscipline::NoQueue: spec = mu_noqueue(config); break;
    case QueueDiscipline::Fifo: spec = mu_fifo(config, fifo_delta).spec; break;
    }
    std::vector<double> beta(static_cast<std::size_t>(config.n_streams));
    for (int i = 0; i < config.n_streams; ++i)
        beta[i] = config.weight[i] / (config.channel_reliability[i] * spec.mu[i]);
    return beta;
}

} // namespace aoisim
