#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoisim/model.hpp"
#include "aoisim/policies.hpp"

namespace aoisim {

// Delivery log and accumulated metrics of one stream over a finished run.
// Ages and backlogs are integer-exact; sum(inter_delivery) + residual always
// equals the number of slots simulated.
struct StreamPathStats {
    std::int64_t deliveries = 0;              // fresher-packet deliveries D(T)
    std::vector<std::int64_t> inter_delivery; // I[m], I[1] = slot of first delivery
    std::vector<std::int64_t> delays;         // system time z[m] at each delivery
    std::int64_t residual = 0;                // slots after the last delivery
    std::int64_t aoi_sum = 0;                 // sum_t h(t)
    double backlog_mean = 0.0;                // time-average queue length
    double throughput = 0.0;                  // deliveries / slots
};

struct SamplePathStats {
    std::vector<StreamPathStats> streams;
    std::int64_t slots = 0;      // slots actually simulated (< horizon if diverged)
    double weighted_aoi = 0.0;   // (1/(slots*N)) sum_i w_i sum_t h_i(t)
    // Mean total backlog over each half of the run; their difference per slot
    // estimates the backlog growth rate of an unstable system.
    double backlog_mean_first_half = 0.0;
    double backlog_mean_second_half = 0.0;

    double backlog_slope() const;
};

struct RunResult {
    SamplePathStats stats;
    double ewsaoi = 0.0;
    bool diverged = false; // total backlog hit the safety cap
    NetworkConfig config_echo;
    std::string policy_echo;
    QueueDiscipline discipline = QueueDiscipline::SinglePacket;
};

struct SimOptions {
    // Total queued packets across streams at which an unstable FIFO run is
    // cut short instead of exhausting memory.
    std::int64_t backlog_cap = 10'000'000;
    // Concurrent replications; 0 means AOISIM_WORKERS / hardware.
    int max_workers = 0;
};

// Simulate `config.horizon` slots: per slot, arrivals are applied first, the
// policy then observes the post-arrival state and decides, the channels are
// realized and the ages advance. Every delivery under the three disciplines
// is strictly fresher than the previous one; this is asserted while logging.
RunResult run(const NetworkConfig& config, QueueDiscipline discipline, const Policy& policy,
              const SimOptions& options = {});

// Per-stream relative gap between the accumulated average age and its exact
// reconstruction from the delivery log (delays, inter-delivery times and the
// residual tail). Zero up to rounding on every finished run.
std::vector<double> prop1_identity_check(const SamplePathStats& stats, std::int64_t slots);

struct ReplicationSummary {
    double mean = 0.0;
    double stderr_mean = 0.0;           // 0 when replications == 1
    std::vector<double> ewsaoi;         // per replication, in seed order
    std::vector<double> backlog_slope;  // per replication
    std::vector<char> capped;           // per replication: hit the backlog cap
    int diverged_count = 0;             // total capped runs
};

// Independent replications with seeds config.seed + k. Runs may execute
// concurrently (worker count from AOISIM_WORKERS or the hardware); results
// are merged in seed order, so the summary does not depend on scheduling.
ReplicationSummary replicate(const NetworkConfig& config, QueueDiscipline discipline,
                             const Policy& policy, int replications,
                             const SimOptions& options = {});

int worker_count();

} // namespace aoisim
