#pragma once

#include <random>
#include <vector>

#include "aoisim/model.hpp"
#include "aoisim/policies.hpp"

namespace testutil {

inline aoisim::NetworkConfig random_config(std::mt19937_64& g, int max_streams = 8,
                                           std::int64_t horizon = 10'000) {
    std::uniform_int_distribution<int> nd(1, max_streams);
    std::uniform_real_distribution<double> pd(0.15, 1.0), ld(0.05, 1.0), wd(0.1, 10.0);
    aoisim::NetworkConfig c;
    c.n_streams = nd(g);
    for (int i = 0; i < c.n_streams; ++i) {
        c.channel_reliability.push_back(pd(g));
        c.arrival_rate.push_back(ld(g));
        c.weight.push_back(wd(g));
    }
    c.horizon = horizon;
    c.seed = g();
    return c;
}

// Random allocation with all mu_i > 0 and sum strictly below 1.
inline aoisim::RandomizedPolicySpec random_spec(std::mt19937_64& g, int n) {
    std::uniform_real_distribution<double> ud(0.02, 1.0), budget(0.4, 1.0);
    aoisim::RandomizedPolicySpec spec;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        spec.mu.push_back(ud(g));
        total += spec.mu.back();
    }
    const double scale = budget(g) / total;
    for (double& m : spec.mu) m *= scale;
    return spec;
}

// Random throughput vector inside the feasible region of the lower bound:
// 0 < q_i <= lambda_i and sum q_i/p_i <= 1.
inline std::vector<double> random_feasible_throughput(std::mt19937_64& g,
                                                      const aoisim::NetworkConfig& c) {
    std::uniform_real_distribution<double> frac(0.05, 1.0);
    std::vector<double> q(c.arrival_rate.size());
    double used = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = frac(g) * c.arrival_rate[i];
        used += q[i] / c.channel_reliability[i];
    }
    if (used > 1.0) {
        const double shrink = frac(g) / used;
        for (double& v : q) v *= shrink;
    }
    return q;
}

} // namespace testutil
