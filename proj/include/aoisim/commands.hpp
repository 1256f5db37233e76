#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace aoisim {

// Exit codes: 0 success, 1 usage/parse error, 2 verification failure.

// Print the lower bound, the three optimal randomized allocations (or the
// FIFO infeasibility), their closed-form objective values and the stability
// margin of one network instance.
int cmd_analyze(const std::string& config_path, std::ostream& out, std::ostream& err);

struct SimulateArgs {
    std::string config_path;
    std::string discipline = "single"; // single | noqueue | fifo
    std::string policy = "optimal-randomized";
    std::optional<std::int64_t> horizon;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);

int cmd_sweep(const std::string& spec_path, const std::string& output_override, bool full,
              std::ostream& out, std::ostream& err);

int cmd_verify(bool full, std::ostream& out, std::ostream& err);

} // namespace aoisim
