#include "aoisim/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <future>
#include <thread>

#include "aoisim/rng.hpp"

namespace aoisim {

double SamplePathStats::backlog_slope() const {
    if (slots < 2) return 0.0;
    return (backlog_mean_second_half - backlog_mean_first_half) / (0.5 * slots);
}

RunResult run(const NetworkConfig& config, QueueDiscipline discipline, const Policy& policy,
              const SimOptions& options) {
    config.validate();
    policy.validate(config);

    const int n = config.n_streams;
    const std::int64_t horizon = config.horizon;
    const std::int64_t first_half = horizon / 2;

    RandomStream arrivals_rng(config.seed, RngPurpose::Arrivals);
    RandomStream channels_rng(config.seed, RngPurpose::Channels);
    RandomStream policy_rng(config.seed, RngPurpose::Policy);

    std::vector<StreamState> states = initial_states(config);

    struct Accum {
        std::int64_t aoi_sum = 0;
        std::int64_t backlog_sum = 0;
        std::int64_t deliveries = 0;
        std::int64_t last_delivery_slot = 0;
        std::vector<std::int64_t> inter_delivery;
        std::vector<std::int64_t> delays;
    };
    std::vector<Accum> acc(static_cast<std::size_t>(n));
    std::int64_t backlog_first = 0, backlog_second = 0;

    std::vector<std::uint8_t> arrivals(static_cast<std::size_t>(n));
    std::vector<std::uint8_t> channels(static_cast<std::size_t>(n));
    std::vector<StreamObservation> obs(static_cast<std::size_t>(n));
    SlotEvents events;

    bool diverged = false;
    std::int64_t slots = 0;

    for (std::int64_t t = 1; t <= horizon; ++t) {
        std::int64_t backlog_total = 0;
        for (int i = 0; i < n; ++i) backlog_total += static_cast<std::int64_t>(states[i].queue.size());
        if (backlog_total > options.backlog_cap) {
            diverged = true;
            break;
        }
        slots = t;

        for (int i = 0; i < n; ++i) {
            acc[i].aoi_sum += states[i].aoi;
            acc[i].backlog_sum += static_cast<std::int64_t>(states[i].queue.size());
        }
        (t <= first_half ? backlog_first : backlog_second) += backlog_total;

        for (int i = 0; i < n; ++i) {
            arrivals[i] = arrivals_rng.next_bernoulli(config.arrival_rate[i]) ? 1 : 0;
            if (arrivals[i]) apply_arrival(states[i], discipline, t);
        }
        for (int i = 0; i < n; ++i) {
            obs[i].aoi = states[i].aoi;
            if (states[i].has_packet())
                obs[i].system_time = states[i].system_time(t);
            else
                obs[i].system_time.reset();
        }

        const double draw = policy_rng.next_uniform();
        const std::optional<int> decision = decide(policy, config, obs, draw);

        for (int i = 0; i < n; ++i)
            channels[i] = channels_rng.next_bernoulli(config.channel_reliability[i]) ? 1 : 0;

        std::int64_t tx_delay = 0;
        if (decision && states[*decision].has_packet())
            tx_delay = states[*decision].system_time(t);

        advance_slot_into(states, config, discipline, decision, arrivals, channels, t, events);

        if (decision && events.delivered[static_cast<std::size_t>(*decision)]) {
            Accum& a = acc[static_cast<std::size_t>(*decision)];
            a.inter_delivery.push_back(t - a.last_delivery_slot);
            a.delays.push_back(tx_delay);
            a.last_delivery_slot = t;
            a.deliveries += 1;
        }
    }

    RunResult result;
    result.diverged = diverged;
    result.config_echo = config;
    result.policy_echo = policy.describe();
    result.discipline = discipline;

    SamplePathStats& stats = result.stats;
    stats.slots = std::max<std::int64_t>(slots, 1);
    stats.streams.resize(static_cast<std::size_t>(n));
    double weighted = 0.0;
    for (int i = 0; i < n; ++i) {
        StreamPathStats& s = stats.streams[static_cast<std::size_t>(i)];
        Accum& a = acc[static_cast<std::size_t>(i)];
        s.deliveries = a.deliveries;
        s.inter_delivery = std::move(a.inter_delivery);
        s.delays = std::move(a.delays);
        s.residual = stats.slots - a.last_delivery_slot;
        s.aoi_sum = a.aoi_sum;
        s.backlog_mean = static_cast<double>(a.backlog_sum) / stats.slots;
        s.throughput = static_cast<double>(a.deliveries) / stats.slots;
        weighted += config.weight[i] * static_cast<double>(a.aoi_sum);
    }
    stats.weighted_aoi = weighted / (static_cast<double>(stats.slots) * n);
    const std::int64_t first_count = std::min(stats.slots, first_half);
    const std::int64_t second_count = std::max<std::int64_t>(stats.slots - first_half, 0);
    stats.backlog_mean_first_half =
        first_count > 0 ? static_cast<double>(backlog_first) / first_count : 0.0;
    stats.backlog_mean_second_half =
        second_count > 0 ? static_cast<double>(backlog_second) / second_count : 0.0;

    result.ewsaoi = stats.weighted_aoi;
    return result;
}

std::vector<double> prop1_identity_check(const SamplePathStats& stats, std::int64_t slots) {
    std::vector<double> residuals;
    residuals.reserve(stats.streams.size());
    for (const StreamPathStats& s : stats.streams) {
        // Reconstruct sum_t h(t) from the delivery log. Every term is an
        // integer below 2^53, so the arithmetic is exact in doubles.
        double reconstructed = 0.0;
        double prev_delay = 0.0;
        for (std::size_t m = 0; m < s.inter_delivery.size(); ++m) {
            const double gap = static_cast<double>(s.inter_delivery[m]);
            reconstructed += prev_delay * gap + 0.5 * (gap + 1.0) * gap;
            prev_delay = static_cast<double>(s.delays[m]);
        }
        const double tail = static_cast<double>(s.residual);
        reconstructed += prev_delay * tail + 0.5 * (tail + 1.0) * tail;

        const double lhs = static_cast<double>(s.aoi_sum) / slots;
        const double rhs = reconstructed / slots;
        residuals.push_back(std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    return residuals;
}

int worker_count() {
    if (const char* env = std::getenv("AOISIM_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

ReplicationSummary replicate(const NetworkConfig& config, QueueDiscipline discipline,
                             const Policy& policy, int replications, const SimOptions& options) {
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");

    std::vector<double> values(static_cast<std::size_t>(replications));
    std::vector<double> slopes(static_cast<std::size_t>(replications));
    std::vector<char> diverged(static_cast<std::size_t>(replications), 0);

    const auto run_one = [&](int k) {
        NetworkConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(k);
        const RunResult r = run(c, discipline, policy, options);
        values[static_cast<std::size_t>(k)] = r.ewsaoi;
        slopes[static_cast<std::size_t>(k)] = r.stats.backlog_slope();
        diverged[static_cast<std::size_t>(k)] = r.diverged ? 1 : 0;
    };

    const int workers =
        std::min(options.max_workers > 0 ? options.max_workers : worker_count(), replications);
    if (workers <= 1) {
        for (int k = 0; k < replications; ++k) run_one(k);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int k = w; k < replications; k += workers) run_one(k);
            });
        }
        for (auto& th : pool) th.join();
    }

    ReplicationSummary summary;
    summary.ewsaoi = values;
    summary.backlog_slope = slopes;
    summary.capped.assign(diverged.begin(), diverged.end());
    for (int k = 0; k < replications; ++k) {
        summary.mean += values[static_cast<std::size_t>(k)];
        summary.diverged_count += diverged[static_cast<std::size_t>(k)];
    }
    summary.mean /= replications;
    if (replications > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - summary.mean) * (v - summary.mean);
        summary.stderr_mean = std::sqrt(ss / (replications - 1)) / std::sqrt(double(replications));
    }
    return summary;
}

} // namespace aoisim
