#pragma once

#include <functional>
#include <vector>

#include "aoisim/model.hpp"

namespace aoisim::oracles {

// Brute-force counterparts of the closed-form solvers. They only ever
// evaluate objectives on meshes, so agreement with the analytic routes is a
// meaningful check rather than a tautology.

// Argmin of a unimodal scalar function on [lo, hi].
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-10);

// Central finite difference (f(x+h) - f(x-h)) / 2h.
double central_difference(const std::function<double(double)>& f, double x, double h);

// Smallest value of (1/2N) sum w_i (1/q_i + 1) over the feasible throughput
// region { 0 < q_i <= lambda_i, sum q_i/p_i <= 1 } by direct search.
// Exhaustive mesh for N <= 3; N == 4 uses a coarse pass plus local
// refinement at the requested mesh. Other sizes are rejected.
double lower_bound_grid(const NetworkConfig& config, double mesh);

struct MeshResult {
    std::vector<double> mu;
    double value = 0.0;
};

// Best full-budget allocation (sum mu = 1) for an arbitrary per-spec
// objective, by exhaustive mesh over the free coordinates (N = 1, 2 or 3).
// Objectives may signal an infeasible point by throwing; such points are
// skipped. mu_min gives per-stream lower bounds (empty = none).
MeshResult best_mu_on_simplex(int n_streams,
                              const std::function<double(const std::vector<double>&)>& objective,
                              double mesh, const std::vector<double>& mu_min = {});

} // namespace aoisim::oracles
