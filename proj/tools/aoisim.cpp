#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aoisim/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Age-of-information scheduling: analysis, simulation and sweeps"};
    app.require_subcommand(1);

    std::string analyze_config;
    CLI::App* analyze = app.add_subcommand("analyze", "Closed-form report for one network");
    analyze->add_option("config", analyze_config, "network config file")->required();

    aoisim::SimulateArgs sim_args;
    std::int64_t sim_horizon = 0;
    std::uint64_t sim_seed = 0;
    CLI::App* simulate = app.add_subcommand("simulate", "Run one simulation");
    simulate->add_option("config", sim_args.config_path, "network config file")->required();
    simulate->add_option("--discipline", sim_args.discipline, "single | noqueue | fifo");
    simulate->add_option("--policy", sim_args.policy, "optimal-randomized | max-weight | naive");
    CLI::Option* horizon_opt = simulate->add_option("--T", sim_horizon, "horizon override");
    CLI::Option* seed_opt = simulate->add_option("--seed", sim_seed, "seed override");

    std::string sweep_spec, sweep_out;
    bool sweep_full = false;
    CLI::App* sweep = app.add_subcommand("sweep", "Arrival-rate sweep to CSV");
    sweep->add_option("spec", sweep_spec, "sweep spec file")->required();
    sweep->add_option("--out", sweep_out, "output CSV path (default from spec)");
    sweep->add_flag("--full", sweep_full, "long-horizon settings: T=2e6, 10 replications");

    bool verify_quick = false, verify_full = false;
    CLI::App* verify = app.add_subcommand("verify", "Run the cross-validation suite");
    verify->add_flag("--quick", verify_quick, "short simulations (default)");
    verify->add_flag("--full", verify_full, "long-horizon settings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (analyze->parsed()) return aoisim::cmd_analyze(analyze_config, std::cout, std::cerr);
        if (simulate->parsed()) {
            if (*horizon_opt) sim_args.horizon = sim_horizon;
            if (*seed_opt) sim_args.seed = sim_seed;
            return aoisim::cmd_simulate(sim_args, std::cout, std::cerr);
        }
        if (sweep->parsed())
            return aoisim::cmd_sweep(sweep_spec, sweep_out, sweep_full, std::cout, std::cerr);
        if (verify->parsed()) {
            if (verify_quick && verify_full) {
                std::cerr << "error: --quick and --full are mutually exclusive\n";
                return 1;
            }
            return aoisim::cmd_verify(verify_full, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
