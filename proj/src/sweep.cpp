#include "aoisim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "aoisim/analysis.hpp"
#include "aoisim/policies.hpp"
#include "aoisim/sim.hpp"

namespace aoisim {

namespace {

constexpr double kDivergenceSlope = 0.01; // packets per slot

const std::vector<QueueDiscipline> kDisciplineOrder = {
    QueueDiscipline::SinglePacket, QueueDiscipline::NoQueue, QueueDiscipline::Fifo};
const std::vector<std::string> kPolicyOrder = {"optimal-randomized", "max-weight", "naive"};

bool naive_fifo_stable(const NetworkConfig& c) {
    for (int i = 0; i < c.n_streams; ++i) {
        if (c.channel_reliability[i] / c.n_streams <= c.arrival_rate[i]) return false;
    }
    return true;
}

// Max-weight tuning for FIFO outside the tightened stability region, where no
// stabilizing allocation exists: fall back to the single-packet weights.
std::vector<double> beta_for(const NetworkConfig& c, QueueDiscipline d) {
    try {
        return default_beta(c, d);
    } catch (const InfeasibilityError&) {
        std::vector<double> beta(static_cast<std::size_t>(c.n_streams));
        const RandomizedPolicySpec spec = mu_single(c);
        for (int i = 0; i < c.n_streams; ++i)
            beta[i] = c.weight[i] / (c.channel_reliability[i] * spec.mu[i]);
        return beta;
    }
}

struct SimTask {
    std::size_t row = 0;
    NetworkConfig config;
    QueueDiscipline discipline = QueueDiscipline::SinglePacket;
    Policy policy;
    int replications = 1;
};

} // namespace

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, bool full_settings) {
    const std::int64_t horizon =
        full_settings ? 2'000'000 : (spec.horizon > 0 ? spec.horizon : 200'000);
    const int replications = full_settings ? 10 : (spec.replications > 0 ? spec.replications : 5);

    std::vector<double> lambdas = spec.lambda_values;
    std::sort(lambdas.begin(), lambdas.end());

    const auto has = [](const auto& list, const auto& item) {
        return std::find(list.begin(), list.end(), item) != list.end();
    };

    std::vector<SweepRow> rows;
    std::vector<SimTask> tasks;

    for (double lambda : lambdas) {
        NetworkConfig config = spec.config_at(lambda);
        config.horizon = horizon;
        const double lb = lower_bound(config).value;

        for (QueueDiscipline discipline : kDisciplineOrder) {
            if (!has(spec.disciplines, discipline)) continue;
            for (const std::string& policy : kPolicyOrder) {
                if (!has(spec.policies, policy)) continue;

                SweepRow row;
                row.lambda = lambda;
                row.discipline = discipline;
                row.policy = policy;
                row.lower_bound = lb;

                if (policy == "max-weight") {
                    row.source = "simulated";
                    tasks.push_back({rows.size(), config, discipline,
                                     Policy::max_weight(beta_for(config, discipline)),
                                     replications});
                } else {
                    const RandomizedPolicySpec mu =
                        policy == "naive" ? RandomizedPolicySpec{std::vector<double>(
                                                config.n_streams, 1.0 / config.n_streams)}
                                          : RandomizedPolicySpec{};
                    row.source = "closed_form";
                    switch (discipline) {
                    case QueueDiscipline::SinglePacket:
                        row.ewsaoi_mean = ewsaoi_single(
                            config, policy == "naive" ? mu : mu_single(config));
                        break;
                    case QueueDiscipline::NoQueue:
                        row.ewsaoi_mean = ewsaoi_noqueue(
                            config, policy == "naive" ? mu : mu_noqueue(config));
                        break;
                    case QueueDiscipline::Fifo:
                        if (policy == "naive") {
                            if (naive_fifo_stable(config)) {
                                row.ewsaoi_mean = ewsaoi_fifo(config, mu);
                            } else {
                                // No closed form off the stability region:
                                // measure the blow-up instead.
                                row.source = "simulated";
                                tasks.push_back({rows.size(), config, discipline,
                                                 Policy::naive(config.n_streams), replications});
                            }
                        } else {
                            try {
                                row.ewsaoi_mean = mu_fifo(config).ewsaoi;
                            } catch (const InfeasibilityError&) {
                                row.ewsaoi_mean = std::numeric_limits<double>::infinity();
                                row.diverged_fraction = 1.0;
                            }
                        }
                        break;
                    }
                }
                rows.push_back(std::move(row));
            }
        }
    }

    // Simulated points on the worker pool; each row slot is written by
    // exactly one task, so rows stay in deterministic order.
    const auto run_task = [&](const SimTask& task) {
        SimOptions options;
        options.max_workers = 1; // parallelism lives at the task level
        const ReplicationSummary summary =
            replicate(task.config, task.discipline, task.policy, task.replications, options);
        SweepRow& row = rows[task.row];
        row.ewsaoi_mean = summary.mean;
        row.ewsaoi_stderr = summary.stderr_mean;
        int diverged = 0;
        for (std::size_t k = 0; k < summary.ewsaoi.size(); ++k) {
            if (summary.capped[k] || summary.backlog_slope[k] > kDivergenceSlope) ++diverged;
        }
        row.diverged_fraction = static_cast<double>(diverged) / task.replications;
    };

    const int workers = std::min<int>(worker_count(), static_cast<int>(tasks.size()));
    if (workers <= 1) {
        for (const SimTask& task : tasks) run_task(task);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t k = static_cast<std::size_t>(w); k < tasks.size();
                     k += static_cast<std::size_t>(workers))
                    run_task(tasks[k]);
            });
        }
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "lambda,discipline,policy,source,ewsaoi_mean,ewsaoi_stderr,lower_bound,"
           "diverged_fraction\n";
    for (const SweepRow& row : rows) {
        out << format_number(row.lambda) << ',' << discipline_name(row.discipline) << ','
            << row.policy << ',' << row.source << ',' << format_number(row.ewsaoi_mean) << ','
            << format_number(row.ewsaoi_stderr) << ',' << format_number(row.lower_bound) << ','
            << format_number(row.diverged_fraction) << '\n';
    }
}

} // namespace aoisim
