#include "aoisim/analysis.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace aoisim {

namespace {

constexpr double kSumTolerance = 1e-9;    // equality constraints
constexpr double kBisectionWidth = 1e-14; // interval width cutoff
constexpr int kMaxBisectionIters = 200;

void check_mu_shape(const RandomizedPolicySpec& spec, int n) {
    if (static_cast<int>(spec.mu.size()) != n)
        throw std::invalid_argument("policy spec has " + std::to_string(spec.mu.size()) +
                                    " entries, config has " + std::to_string(n) + " streams");
    for (std::size_t i = 0; i < spec.mu.size(); ++i) {
        if (!std::isfinite(spec.mu[i]) || spec.mu[i] <= 0.0)
            throw std::domain_error("mu[" + std::to_string(i) + "] must be > 0");
    }
}

double mu_sum(const RandomizedPolicySpec& spec) {
    return std::accumulate(spec.mu.begin(), spec.mu.end(), 0.0);
}

} // namespace

double RandomizedPolicySpec::idle_mass() const {
    return std::max(0.0, 1.0 - std::accumulate(mu.begin(), mu.end(), 0.0));
}

void RandomizedPolicySpec::validate() const {
    if (mu.empty()) throw std::invalid_argument("policy spec is empty");
    double sum = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (!std::isfinite(mu[i]) || mu[i] <= 0.0)
            throw std::invalid_argument("mu[" + std::to_string(i) + "] must be in (0,1]");
        sum += mu[i];
    }
    if (sum > 1.0 + kSumTolerance)
        throw std::invalid_argument("sum of scheduling probabilities exceeds 1");
}

// ---------------------------------------------------------------------------
// Lower bound: water-filling over long-term throughput.
// ---------------------------------------------------------------------------

namespace {

struct LbTerms {
    std::vector<double> gamma_i; // per-stream breakpoint w_i p_i / (2N lambda_i^2)
    double gamma_tilde = 0.0;    // (sum sqrt(w_i/p_i))^2 / (2N)
    double rate_sum = 0.0;       // sum lambda_i / p_i
};

LbTerms lb_terms(const NetworkConfig& c) {
    const int n = c.n_streams;
    LbTerms t;
    t.gamma_i.resize(n);
    double root_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = c.weight[i], p = c.channel_reliability[i], lam = c.arrival_rate[i];
        t.gamma_i[i] = w * p / (2.0 * n * lam * lam);
        root_sum += std::sqrt(w / p);
        t.rate_sum += lam / p;
    }
    t.gamma_tilde = root_sum * root_sum / (2.0 * n);
    return t;
}

// sum_i q_i(gamma)/p_i for gamma > 0; nonincreasing in gamma.
double lb_throughput_sum(const NetworkConfig& c, const LbTerms& t, double gamma) {
    double s = 0.0;
    for (int i = 0; i < c.n_streams; ++i) {
        const double ratio = std::min(1.0, std::sqrt(t.gamma_i[i] / gamma));
        s += c.arrival_rate[i] * ratio / c.channel_reliability[i];
    }
    return s;
}

LowerBoundSolution lb_solution_at(const NetworkConfig& c, const LbTerms& t, double gamma_star) {
    const int n = c.n_streams;
    LowerBoundSolution sol;
    sol.gamma_star = gamma_star;
    sol.throughput.resize(n);
    sol.multipliers.resize(n);
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
        const double lam = c.arrival_rate[i];
        const double q = gamma_star > 0.0
                             ? lam * std::min(1.0, std::sqrt(t.gamma_i[i] / gamma_star))
                             : lam;
        sol.throughput[i] = q;
        sol.multipliers[i] = std::max(0.0, (t.gamma_i[i] - gamma_star) / c.channel_reliability[i]);
        value += c.weight[i] * (1.0 / q + 1.0);
    }
    sol.value = value / (2.0 * n);
    return sol;
}

} // namespace

LowerBoundSolution lower_bound(const NetworkConfig& config) {
    config.validate();
    const LbTerms t = lb_terms(config);
    const double gamma_start =
        std::max(t.gamma_tilde, *std::max_element(t.gamma_i.begin(), t.gamma_i.end()));

    // The starting point never oversubscribes the channel; if it already
    // saturates it, the multiplier is found.
    if (lb_throughput_sum(config, t, gamma_start) >= 1.0 - kSumTolerance)
        return lb_solution_at(config, t, gamma_start);

    // Channel constraint slack at full throughput: multiplier is zero.
    if (t.rate_sum < 1.0) return lb_solution_at(config, t, 0.0);

    double lo = *std::min_element(t.gamma_i.begin(), t.gamma_i.end()); // sum(lo) >= 1
    double hi = gamma_start;                                           // sum(hi) < 1
    double gamma = 0.5 * (lo + hi);
    for (int iter = 0; iter < kMaxBisectionIters; ++iter) {
        gamma = 0.5 * (lo + hi);
        if (gamma <= lo || gamma >= hi) break; // no representable progress
        const double s = lb_throughput_sum(config, t, gamma);
        if (std::abs(s - 1.0) < kSumTolerance) break;
        (s > 1.0 ? lo : hi) = gamma;
        if (hi - lo < kBisectionWidth) {
            gamma = 0.5 * (lo + hi);
            break;
        }
    }
    return lb_solution_at(config, t, gamma);
}

LowerBoundSolution lower_bound_analytic(const NetworkConfig& config) {
    config.validate();
    const int n = config.n_streams;
    const LbTerms t = lb_terms(config);

    // Streams with breakpoint below gamma are channel-limited and contribute
    // coef_i/sqrt(gamma); the rest are rate-capped and contribute lambda_i/p_i.
    std::vector<double> coef(n);
    for (int i = 0; i < n; ++i)
        coef[i] = std::sqrt(config.weight[i] / (2.0 * n * config.channel_reliability[i]));

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return t.gamma_i[a] > t.gamma_i[b]; });

    double capped_rate = 0.0;                                    // rate-capped streams
    double limited_coef = std::accumulate(coef.begin(), coef.end(), 0.0); // channel-limited
    double hi_bound = std::numeric_limits<double>::infinity();

    for (int k = 0; k <= n; ++k) {
        const double lo_bound = (k < n) ? t.gamma_i[order[k]] : 0.0;
        if (capped_rate < 1.0 && limited_coef > 0.0) {
            const double root = limited_coef / (1.0 - capped_rate);
            const double candidate = root * root;
            const double tol = 1e-12 * std::max(1.0, candidate);
            if (candidate >= lo_bound - tol && candidate <= hi_bound + tol)
                return lb_solution_at(config, t, std::max(candidate, lo_bound));
        } else if (capped_rate >= 1.0) {
            // Saturation happened exactly at the breakpoint above this segment.
            return lb_solution_at(config, t, hi_bound);
        }
        if (k < n) {
            const int i = order[k];
            limited_coef -= coef[i];
            capped_rate += config.arrival_rate[i] / config.channel_reliability[i];
            hi_bound = t.gamma_i[i];
        }
    }
    // All streams rate-capped on (0, min gamma_i).
    if (t.rate_sum < 1.0) return lb_solution_at(config, t, 0.0);
    return lb_solution_at(config, t, *std::min_element(t.gamma_i.begin(), t.gamma_i.end()));
}

// ---------------------------------------------------------------------------
// Stationary randomized policies: single-packet and no-queue closed forms.
// ---------------------------------------------------------------------------

RandomizedPolicySpec mu_single(const NetworkConfig& config) {
    config.validate();
    RandomizedPolicySpec spec;
    spec.mu.resize(config.n_streams);
    double sum = 0.0;
    for (int i = 0; i < config.n_streams; ++i) {
        spec.mu[i] = std::sqrt(config.weight[i] / config.channel_reliability[i]);
        sum += spec.mu[i];
    }
    for (double& m : spec.mu) m /= sum;
    return spec;
}

double ewsaoi_single(const NetworkConfig& config, const RandomizedPolicySpec& spec) {
    config.validate();
    check_mu_shape(spec, config.n_streams);
    if (mu_sum(spec) > 1.0 + kSumTolerance)
        throw std::invalid_argument("sum of scheduling probabilities exceeds 1");
    double total = 0.0;
    for (int i = 0; i < config.n_streams; ++i) {
        total += config.weight[i] * (1.0 / config.arrival_rate[i] - 1.0 +
                                     1.0 / (config.channel_reliability[i] * spec.mu[i]));
    }
    return total / config.n_streams;
}

RandomizedPolicySpec mu_noqueue(const NetworkConfig& config) {
    config.validate();
    RandomizedPolicySpec spec;
    spec.mu.resize(config.n_streams);
    double sum = 0.0;
    for (int i = 0; i < config.n_streams; ++i) {
        spec.mu[i] = std::sqrt(config.weight[i] /
                               (config.channel_reliability[i] * config.arrival_rate[i]));
        sum += spec.mu[i];
    }
    for (double& m : spec.mu) m /= sum;
    return spec;
}

double ewsaoi_noqueue(const NetworkConfig& config, const RandomizedPolicySpec& spec) {
    config.validate();
    check_mu_shape(spec, config.n_streams);
    if (mu_sum(spec) > 1.0 + kSumTolerance)
        throw std::invalid_argument("sum of scheduling probabilities exceeds 1");
    double total = 0.0;
    for (int i = 0; i < config.n_streams; ++i) {
        total += config.weight[i] / (config.channel_reliability[i] * spec.mu[i] *
                                     config.arrival_rate[i]);
    }
    return total / config.n_streams;
}

// ---------------------------------------------------------------------------
// FIFO queue: closed forms and the delta-tightened allocation.
// ---------------------------------------------------------------------------

namespace {

void check_stable(double p, double lam, double mu, int stream = -1) {
    if (!(std::isfinite(p) && p > 0.0) || !(std::isfinite(lam) && lam > 0.0) ||
        !(std::isfinite(mu) && mu > 0.0))
        throw std::domain_error("fifo parameters must be positive");
    if (p * mu <= lam) {
        std::ostringstream os;
        if (stream >= 0) os << "stream " << stream << ": ";
        os << "fifo queue unstable: service rate p*mu = " << p * mu
           << " <= arrival rate lambda = " << lam;
        throw InstabilityError(os.str());
    }
}

} // namespace

double fifo_stream_aoi(double p, double lam, double mu) {
    check_stable(p, lam, mu);
    const double s = p * mu;
    const double load = lam / s;
    return 1.0 / s + 1.0 / lam + load * load * (1.0 - s) / (s - lam);
}

double fifo_backlog(double p, double lam, double mu) {
    check_stable(p, lam, mu);
    const double s = p * mu;
    return lam * (1.0 - s) / (s - lam);
}

double fifo_aoi_derivative(double w, double p, double lam, double mu, int n_streams) {
    check_stable(p, lam, mu);
    const double s = p * mu;
    const double term1 = lam / (p * mu * mu) * (2.0 / s - 1.0);
    const double term2 = p * (1.0 - lam) / ((s - lam) * (s - lam));
    return w / n_streams * (term1 - term2);
}

double ewsaoi_fifo(const NetworkConfig& config, const RandomizedPolicySpec& spec) {
    config.validate();
    check_mu_shape(spec, config.n_streams);
    double total = 0.0;
    for (int i = 0; i < config.n_streams; ++i) {
        check_stable(config.channel_reliability[i], config.arrival_rate[i], spec.mu[i], i);
        total += config.weight[i] *
                 fifo_stream_aoi(config.channel_reliability[i], config.arrival_rate[i], spec.mu[i]);
    }
    return total / config.n_streams;
}

namespace {

// mu with marginal cost equal to `target` (< 0), never below `floor`.
// The marginal cost is nondecreasing in mu on the stable region, so this is a
// plain bisection after growing an upper bracket.
double inverse_marginal_cost(double w, double p, double lam, int n, double floor, double target) {
    assert(target < 0.0);
    if (fifo_aoi_derivative(w, p, lam, floor, n) >= target) return floor;
    double lo = floor;
    double hi = floor;
    double step = std::max(floor, 0.125);
    while (fifo_aoi_derivative(w, p, lam, hi, n) < target) {
        lo = hi;
        hi += step;
        step *= 2.0;
        if (hi > 1e6) return hi; // caller only compares the resulting sum with 1
    }
    for (int iter = 0; iter < kMaxBisectionIters; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (fifo_aoi_derivative(w, p, lam, mid, n) < target ? lo : hi) = mid;
        if (hi - lo <= 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

FifoOptResult mu_fifo(const NetworkConfig& config, double delta) {
    config.validate();
    if (!(std::isfinite(delta) && delta > 0.0))
        throw std::invalid_argument("delta must be > 0");
    const int n = config.n_streams;

    std::vector<double> floor(n);
    double floor_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        floor[i] = (config.arrival_rate[i] + delta) / config.channel_reliability[i];
        floor_sum += floor[i];
    }
    if (floor_sum > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "infeasible: sum_i (lambda_i + delta)/p_i = " << floor_sum
           << " > 1 (arrival rates outside the delta-tightened stability region)";
        throw InfeasibilityError(os.str());
    }

    FifoOptResult result;
    result.delta = delta;

    if (n == 1) {
        result.spec.mu = {1.0};
        result.converged = true;
        result.ewsaoi = ewsaoi_fifo(config, result.spec);
        return result;
    }

    const auto mu_at = [&](double gamma) {
        std::vector<double> mu(n);
        for (int i = 0; i < n; ++i) {
            mu[i] = inverse_marginal_cost(config.weight[i], config.channel_reliability[i],
                                          config.arrival_rate[i], n, floor[i], -gamma);
        }
        return mu;
    };
    const auto sum_of = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0);
    };

    double gamma_hi = 0.0;
    for (int i = 0; i < n; ++i) {
        gamma_hi = std::max(gamma_hi, -fifo_aoi_derivative(config.weight[i],
                                                           config.channel_reliability[i],
                                                           config.arrival_rate[i], floor[i], n));
    }

    std::vector<double> mu = mu_at(gamma_hi); // all at floors; sum <= 1
    if (std::abs(sum_of(mu) - 1.0) > kSumTolerance) {
        // Grow the allocation by lowering gamma until the budget is used up.
        double gamma_lo = gamma_hi;
        while (sum_of(mu_at(gamma_lo)) < 1.0 && gamma_lo > 1e-300) gamma_lo *= 0.5;
        double gamma = gamma_lo;
        for (int iter = 0; iter < kMaxBisectionIters; ++iter) {
            gamma = 0.5 * (gamma_lo + gamma_hi);
            if (gamma <= gamma_lo || gamma >= gamma_hi) break;
            const double s = sum_of(mu_at(gamma));
            if (std::abs(s - 1.0) < 1e-12) break;
            (s > 1.0 ? gamma_lo : gamma_hi) = gamma;
        }
        mu = mu_at(gamma);
    }

    result.spec.mu = std::move(mu);
    result.converged = std::abs(sum_of(result.spec.mu) - 1.0) < kSumTolerance;
    result.ewsaoi = ewsaoi_fifo(config, result.spec);
    return result;
}

double stability_margin(const NetworkConfig& config) {
    config.validate();
    double rate_sum = 0.0;
    for (int i = 0; i < config.n_streams; ++i)
        rate_sum += config.arrival_rate[i] / config.channel_reliability[i];
    return 1.0 - rate_sum;
}

// ---------------------------------------------------------------------------
// Stationary age distribution of one stream under a randomized policy with a
// single-packet queue.
// ---------------------------------------------------------------------------

McStationary mc_stationary(double p, double lam, double mu, double tail_tol) {
    if (!(p > 0.0 && p <= 1.0) || !(lam > 0.0 && lam <= 1.0) || !(mu > 0.0 && mu <= 1.0))
        throw std::invalid_argument("p, lam, mu must be in (0,1]");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("tail_tol must be > 0");

    const double a = 1.0 - lam;    // no arrival
    const double b = 1.0 - p * mu; // no delivery opportunity
    McStationary out;
    out.p_10 = lam * lam * p * mu;
    const double scale = out.p_10 / lam;

    // inner_h = sum_{k=0}^{h-1} a^(h-1-k) b^k, built with
    // inner_{h+1} = a*inner_h + b^h; P(h) = scale * inner_h.
    double inner = 1.0;
    double bpow = b; // b^h for the current h
    for (std::int64_t h = 1;; ++h) {
        out.p_h.push_back(scale * inner);

        // Exact tails of the remaining mass and mean, from the same recursion:
        //   mass_tail = (a*inner + b^h/(1-b)) / (1-a)
        //   mean_tail = (a*(h+1)*inner + a*mass_tail + geo) / (1-a)
        // with geo = sum_{j>h} j b^(j-1). No cancellation when a ~= b.
        const double mass_tail = (a * inner + bpow / (1.0 - b)) / (1.0 - a);
        const double geo = bpow * (h * (1.0 - b) + 1.0) / ((1.0 - b) * (1.0 - b));
        const double mean_tail =
            scale * (a * (h + 1) * inner + a * mass_tail + geo) / (1.0 - a);
        if (mean_tail < tail_tol) {
            out.truncation_mass = scale * mass_tail;
            break;
        }
        inner = a * inner + bpow;
        bpow *= b;
    }
    return out;
}

double mc_expected_aoi(double p, double lam, double mu, double tail_tol) {
    const McStationary dist = mc_stationary(p, lam, mu, tail_tol);
    double mean = 0.0;
    for (std::size_t h = 0; h < dist.p_h.size(); ++h)
        mean += static_cast<double>(h + 1) * dist.p_h[h];
    return mean;
}

} // namespace aoisim
