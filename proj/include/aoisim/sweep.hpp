#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "aoisim/config_io.hpp"

namespace aoisim {

struct SweepRow {
    double lambda = 0.0;
    QueueDiscipline discipline = QueueDiscipline::SinglePacket;
    std::string policy;        // optimal-randomized | max-weight | naive
    std::string source;        // closed_form | simulated
    double ewsaoi_mean = 0.0;
    double ewsaoi_stderr = 0.0; // 0 for closed-form rows
    double lower_bound = 0.0;
    double diverged_fraction = 0.0;
};

// One row per (lambda, discipline, policy). Randomized policies are evaluated
// through their closed forms wherever those exist; max-weight rows and
// unstable naive FIFO points are simulated. Unstable points are flagged via
// diverged_fraction instead of failing the sweep. Simulated points dispatch
// to a worker pool; rows come back in (lambda, discipline, policy) order
// regardless of completion order.
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, bool full_settings);

// 10 significant digits, '.' separator, LF endings; byte-stable per spec+seed.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

std::string format_number(double value);

} // namespace aoisim
