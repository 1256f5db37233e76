#pragma once

#include <stdexcept>
#include <vector>

#include "aoisim/model.hpp"

namespace aoisim {

// A per-stream service rate p_i*mu_i would not exceed the arrival rate.
struct InstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The tightened FIFO allocation problem has no feasible point.
struct InfeasibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stationary scheduling probabilities mu_1..mu_N; the remaining mass
// mu_0 = 1 - sum(mu) is the probability of idling.
struct RandomizedPolicySpec {
    std::vector<double> mu;

    double idle_mass() const;
    // All mu_i > 0 and sum(mu) <= 1 (small tolerance). Throws std::invalid_argument.
    void validate() const;
};

// Solution of the throughput-relaxed age minimization: the multiplier
// gamma_star, the optimal long-term throughput per stream, the multipliers of
// the per-stream rate caps, and the bound itself.
struct LowerBoundSolution {
    double gamma_star = 0.0;
    std::vector<double> throughput;  // q_i, in (0, lambda_i]
    std::vector<double> multipliers; // zeta_i >= 0
    double value = 0.0;
};

// Water-filling solution of
//   minimize (1/2N) sum w_i (1/q_i + 1)
//   s.t. sum q_i/p_i <= 1, 0 < q_i <= lambda_i.
// The root of sum_i q_i(gamma)/p_i = 1 is located by bisection on the
// monotone map gamma -> q_i(gamma); gamma_star = 0 when the channel
// constraint is slack. The result bounds from below the weighted average age
// of every scheduling policy under every queueing discipline.
LowerBoundSolution lower_bound(const NetworkConfig& config);

// Same solution through the closed form on each segment between sorted
// breakpoints; used to cross-check the bisection route.
LowerBoundSolution lower_bound_analytic(const NetworkConfig& config);

// Optimal stationary probabilities for single-packet queues:
// mu_i proportional to sqrt(w_i/p_i). Independent of the arrival rates.
RandomizedPolicySpec mu_single(const NetworkConfig& config);

// Expected weighted sum age of a stationary randomized policy over
// single-packet queues: (1/N) sum w_i (1/lambda_i - 1 + 1/(p_i mu_i)).
double ewsaoi_single(const NetworkConfig& config, const RandomizedPolicySpec& spec);

// Optimal stationary probabilities without queues:
// mu_i proportional to sqrt(w_i/(p_i lambda_i)).
RandomizedPolicySpec mu_noqueue(const NetworkConfig& config);

// Expected weighted sum age without queues: (1/N) sum w_i/(p_i mu_i lambda_i).
double ewsaoi_noqueue(const NetworkConfig& config, const RandomizedPolicySpec& spec);

// Average age of one stable discrete-time Bernoulli/Bernoulli/1 FIFO queue
// with arrival rate lam and service rate p*mu:
//   1/(p mu) + 1/lam + (lam/(p mu))^2 (1 - p mu)/(p mu - lam).
// Unweighted; callers apply w/N. Throws InstabilityError when p*mu <= lam.
double fifo_stream_aoi(double p, double lam, double mu);

// Steady-state expected backlog of the same queue: lam(1 - p mu)/(p mu - lam).
double fifo_backlog(double p, double lam, double mu);

// Derivative of (w/n) * fifo_stream_aoi with respect to mu; the marginal age
// cost used by the FIFO water-filling step. Negative and nondecreasing on the
// stable region.
double fifo_aoi_derivative(double w, double p, double lam, double mu, int n_streams);

struct FifoOptResult {
    RandomizedPolicySpec spec;
    double delta = 0.0;
    bool converged = false;
    double ewsaoi = 0.0;
};

// Optimal stationary probabilities for FIFO queues, solved on the
// delta-tightened feasible set p_i mu_i >= lambda_i + delta. Outer bisection
// drives sum(mu) to 1; the inner inverse of fifo_aoi_derivative is itself a
// bisection on the convex per-stream cost. Throws InfeasibilityError when
// sum (lambda_i + delta)/p_i > 1.
FifoOptResult mu_fifo(const NetworkConfig& config, double delta = 1e-6);

// Expected weighted sum age of a stationary randomized policy over FIFO
// queues. Throws InstabilityError naming the first unstable stream.
double ewsaoi_fifo(const NetworkConfig& config, const RandomizedPolicySpec& spec);

// 1 - sum lambda_i/p_i. Positive means some policy can stabilize all queues.
double stability_margin(const NetworkConfig& config);

// Stationary distribution of the age of one stream under a randomized policy
// with single-packet queues, truncated once the remaining contribution to the
// mean age drops below tail_tol.
struct McStationary {
    std::vector<double> p_h;     // P(age = h), h = 1..H
    double p_10 = 0.0;           // P(age 1, system time 0) = lam^2 p mu
    double truncation_mass = 0.0;
};

McStationary mc_stationary(double p, double lam, double mu, double tail_tol);

// Truncated mean of the distribution above. Agrees with
// 1/(p mu) + 1/lam - 1 to within tail_tol.
double mc_expected_aoi(double p, double lam, double mu, double tail_tol);

} // namespace aoisim
