#include "aoisim/commands.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "aoisim/analysis.hpp"
#include "aoisim/config_io.hpp"
#include "aoisim/policies.hpp"
#include "aoisim/sim.hpp"
#include "aoisim/sweep.hpp"
#include "aoisim/verify.hpp"

namespace aoisim {

namespace {

std::string join(const std::vector<double>& values) {
    std::ostringstream os;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ", ";
        os << format_number(values[i]);
    }
    return os.str();
}

Policy build_policy(const NetworkConfig& config, QueueDiscipline discipline,
                    const std::string& name, std::ostream& err) {
    if (name == "naive") return Policy::naive(config.n_streams);
    if (name == "max-weight") {
        try {
            return Policy::max_weight(default_beta(config, discipline));
        } catch (const InfeasibilityError& e) {
            err << "note: " << e.what() << "; using single-packet weights for max-weight\n";
            std::vector<double> beta(static_cast<std::size_t>(config.n_streams));
            const RandomizedPolicySpec spec = mu_single(config);
            for (int i = 0; i < config.n_streams; ++i)
                beta[i] = config.weight[i] / (config.channel_reliability[i] * spec.mu[i]);
            return Policy::max_weight(beta);
        }
    }
    if (name != "optimal-randomized")
        throw std::invalid_argument("unknown policy '" + name +
                                    "' (expected optimal-randomized, max-weight or naive)");
    switch (discipline) {
    case QueueDiscipline::SinglePacket: return Policy::stationary_randomized(mu_single(config));
    case QueueDiscipline::NoQueue: return Policy::stationary_randomized(mu_noqueue(config));
    case QueueDiscipline::Fifo: return Policy::stationary_randomized(mu_fifo(config).spec);
    }
    throw std::invalid_argument("unknown discipline");
}

} // namespace

int cmd_analyze(const std::string& config_path, std::ostream& out, std::ostream& err) {
    NetworkConfig config;
    try {
        config = network_config_from(ConfigFile::load(config_path));
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    out << "network: N=" << config.n_streams << "\n";
    out << "  p      = [" << join(config.channel_reliability) << "]\n";
    out << "  lambda = [" << join(config.arrival_rate) << "]\n";
    out << "  w      = [" << join(config.weight) << "]\n";

    const double margin = stability_margin(config);
    out << "stability margin: " << format_number(margin)
        << (margin > 0 ? " (stabilizable)" : " (outside the stability region)") << "\n";

    const LowerBoundSolution lb = lower_bound(config);
    out << "lower bound: " << format_number(lb.value)
        << "  (gamma=" << format_number(lb.gamma_star) << ", q=[" << join(lb.throughput) << "])\n";

    const RandomizedPolicySpec single = mu_single(config);
    out << "single-packet: ewsaoi=" << format_number(ewsaoi_single(config, single)) << "  mu=["
        << join(single.mu) << "]\n";

    const RandomizedPolicySpec noqueue = mu_noqueue(config);
    out << "no-queue:      ewsaoi=" << format_number(ewsaoi_noqueue(config, noqueue)) << "  mu=["
        << join(noqueue.mu) << "]\n";

    try {
        const FifoOptResult fifo = mu_fifo(config);
        out << "fifo:          ewsaoi=" << format_number(fifo.ewsaoi) << "  mu=["
            << join(fifo.spec.mu) << "]  (delta=" << format_number(fifo.delta) << ")\n";
    } catch (const InfeasibilityError& e) {
        out << "fifo:          " << e.what() << "\n";
    }
    return 0;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    NetworkConfig config;
    try {
        config = network_config_from(ConfigFile::load(args.config_path));
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    const auto discipline = discipline_from_name(args.discipline);
    if (!discipline) {
        err << "error: unknown discipline '" << args.discipline
            << "' (expected single, noqueue or fifo)\n";
        return 1;
    }
    if (args.horizon) config.horizon = *args.horizon;
    if (args.seed) config.seed = *args.seed;

    Policy policy;
    try {
        policy = build_policy(config, *discipline, args.policy, err);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const RunResult result = run(config, *discipline, policy);
    out << "discipline=" << discipline_name(*discipline) << " policy=" << policy.describe()
        << " slots=" << result.stats.slots << " seed=" << config.seed << "\n";
    out << "ewsaoi: " << format_number(result.ewsaoi) << (result.diverged ? "  (diverged)" : "")
        << "\n";
    double worst_residual = 0.0;
    for (double r : prop1_identity_check(result.stats, result.stats.slots))
        worst_residual = std::max(worst_residual, r);
    out << "age identity residual: " << format_number(worst_residual) << "\n";
    for (int i = 0; i < config.n_streams; ++i) {
        const StreamPathStats& s = result.stats.streams[static_cast<std::size_t>(i)];
        out << "stream " << i << ": deliveries=" << s.deliveries
            << " throughput=" << format_number(s.throughput)
            << " mean_age=" << format_number(static_cast<double>(s.aoi_sum) / result.stats.slots)
            << " mean_backlog=" << format_number(s.backlog_mean) << "\n";
    }
    return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& output_override, bool full,
              std::ostream& out, std::ostream& err) {
    ExperimentSpec spec;
    try {
        spec = experiment_spec_from(ConfigFile::load(spec_path));
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    const std::vector<SweepRow> rows = run_sweep(spec, full);

    const std::string path = !output_override.empty() ? output_override : spec.output;
    if (path.empty()) {
        write_csv(out, rows);
        return 0;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        err << "error: cannot open output file '" << path << "'\n";
        return 1;
    }
    write_csv(file, rows);
    out << "wrote " << rows.size() << " rows to " << path << "\n";
    return 0;
}

int cmd_verify(bool full, std::ostream& out, std::ostream& err) {
    const auto results = verify::run_all(full ? verify::Depth::Full : verify::Depth::Quick);
    bool all_pass = true;
    for (const auto& check : results) {
        out << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << ": " << check.detail << "\n";
        all_pass = all_pass && check.pass;
    }
    out << (all_pass ? "verification passed" : "verification FAILED") << " (" << results.size()
        << " checks)\n";
    if (!all_pass) {
        err << "error: verification failed\n";
        return 2;
    }
    return 0;
}

} // namespace aoisim
