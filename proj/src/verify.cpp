#include "aoisim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "aoisim/analysis.hpp"
#include "aoisim/oracles.hpp"
#include "aoisim/policies.hpp"
#include "aoisim/sim.hpp"

namespace aoisim::verify {

NetworkConfig reference_net4(double lambda, std::int64_t horizon, std::uint64_t seed) {
    NetworkConfig c;
    c.n_streams = 4;
    c.weight = {4.0, 4.0, 1.0, 1.0};
    c.channel_reliability = {0.25, 0.5, 0.75, 1.0};
    c.arrival_rate = {lambda, 0.75 * lambda, 0.5 * lambda, 0.25 * lambda};
    c.horizon = horizon;
    c.seed = seed;
    return c;
}

NetworkConfig reference_net2(double lambda, std::int64_t horizon, std::uint64_t seed) {
    NetworkConfig c;
    c.n_streams = 2;
    c.weight = {1.0, 1.0};
    c.channel_reliability = {1.0 / 3.0, 1.0};
    c.arrival_rate = {lambda, lambda / 3.0};
    c.horizon = horizon;
    c.seed = seed;
    return c;
}

namespace {

struct Suite {
    std::vector<CheckResult> results;

    void record(const std::string& name, bool pass, const std::string& detail) {
        results.push_back({name, pass, detail});
    }
    void expect_le(const std::string& name, double observed, double limit,
                   const std::string& what) {
        std::ostringstream os;
        os << what << ": observed " << observed << ", limit " << limit;
        record(name, observed <= limit, os.str());
    }
};

NetworkConfig random_config(std::mt19937_64& g, int max_streams = 8) {
    std::uniform_int_distribution<int> nd(1, max_streams);
    std::uniform_real_distribution<double> pd(0.15, 1.0), ld(0.05, 1.0), wd(0.1, 10.0);
    NetworkConfig c;
    c.n_streams = nd(g);
    for (int i = 0; i < c.n_streams; ++i) {
        c.channel_reliability.push_back(pd(g));
        c.arrival_rate.push_back(ld(g));
        c.weight.push_back(wd(g));
    }
    c.horizon = 10'000;
    c.seed = g();
    return c;
}

// Random arrival rates comfortably inside the stability region.
NetworkConfig random_stable_config(std::mt19937_64& g, int n) {
    NetworkConfig c = random_config(g, 1);
    c.n_streams = n;
    c.channel_reliability.clear();
    c.arrival_rate.clear();
    c.weight.clear();
    std::uniform_real_distribution<double> pd(0.3, 1.0), wd(0.2, 5.0), share(0.05, 0.95);
    double budget = 0.7; // sum lambda_i/p_i stays below this
    for (int i = 0; i < n; ++i) {
        const double p = pd(g);
        const double portion = (i + 1 == n) ? budget : budget * share(g);
        budget -= portion;
        c.channel_reliability.push_back(p);
        c.arrival_rate.push_back(std::min(1.0, std::max(0.02, portion * p)));
        c.weight.push_back(wd(g));
    }
    return c;
}

void check_lower_bound_grid(Suite& s) {
    // Trivial single stream: saturated channel, bound exactly 1.
    NetworkConfig one;
    one.n_streams = 1;
    one.channel_reliability = {1.0};
    one.arrival_rate = {1.0};
    one.weight = {1.0};
    one.horizon = 1;
    one.seed = 0;
    const double lb1 = lower_bound(one).value;
    s.record("lower-bound-unit-network", lb1 == 1.0,
             "single saturated stream: value " + std::to_string(lb1) + ", expected 1");

    std::mt19937_64 g(7);
    double worst = 0.0;
    for (int rep = 0; rep < 4; ++rep) {
        NetworkConfig c = random_config(g, 3);
        const double algo = lower_bound(c).value;
        const double grid = oracles::lower_bound_grid(c, 1e-4);
        worst = std::max(worst, std::abs(algo - grid));
    }
    s.expect_le("lower-bound-vs-grid-small", worst, 1e-3,
                "water-filling vs exhaustive mesh, n<=3");

    const NetworkConfig net4 = reference_net4(0.2, 1, 1);
    const double algo4 = lower_bound(net4).value;
    const double grid4 = oracles::lower_bound_grid(net4, 1e-4);
    s.expect_le("lower-bound-vs-grid-net4", std::abs(algo4 - grid4), 1e-3,
                "water-filling vs refined mesh, 4-stream benchmark");
}

void check_lower_bound_routes(Suite& s) {
    std::mt19937_64 g(11);
    double worst_value = 0.0, worst_q = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        NetworkConfig c = random_config(g);
        const auto a = lower_bound(c);
        const auto b = lower_bound_analytic(c);
        worst_value = std::max(worst_value, std::abs(a.value - b.value) / (1.0 + b.value));
        for (std::size_t i = 0; i < a.throughput.size(); ++i)
            worst_q = std::max(worst_q, std::abs(a.throughput[i] - b.throughput[i]));
    }
    s.expect_le("lower-bound-route-agreement", std::max(worst_value, worst_q), 1e-6,
                "bisection vs segment closed form over 200 random networks");
}

void check_mu_optimality(Suite& s) {
    const NetworkConfig c2 = reference_net2(0.2, 1, 1);

    const auto singles = mu_single(c2);
    const auto grid_s = oracles::best_mu_on_simplex(
        2, [&](const std::vector<double>& mu) { return ewsaoi_single(c2, {mu}); }, 1e-5);
    double gap = 0.0;
    for (int i = 0; i < 2; ++i) gap = std::max(gap, std::abs(singles.mu[i] - grid_s.mu[i]));
    s.expect_le("single-queue-mu-vs-grid", gap, 1e-3, "closed form vs mesh argmin");

    const auto noq = mu_noqueue(c2);
    const auto grid_n = oracles::best_mu_on_simplex(
        2, [&](const std::vector<double>& mu) { return ewsaoi_noqueue(c2, {mu}); }, 1e-5);
    gap = 0.0;
    for (int i = 0; i < 2; ++i) gap = std::max(gap, std::abs(noq.mu[i] - grid_n.mu[i]));
    s.expect_le("no-queue-mu-vs-grid", gap, 1e-3, "closed form vs mesh argmin");

    const auto fifo = mu_fifo(c2);
    const auto grid_f = oracles::best_mu_on_simplex(
        2, [&](const std::vector<double>& mu) { return ewsaoi_fifo(c2, {mu}); }, 1e-5);
    gap = 0.0;
    for (int i = 0; i < 2; ++i) gap = std::max(gap, std::abs(fifo.spec.mu[i] - grid_f.mu[i]));
    s.expect_le("fifo-mu-vs-grid-2", gap, 1e-3, "allocation vs mesh argmin, 2 streams");

    std::mt19937_64 g(3);
    const NetworkConfig c3 = random_stable_config(g, 3);
    const auto fifo3 = mu_fifo(c3);
    const auto grid_f3 = oracles::best_mu_on_simplex(
        3, [&](const std::vector<double>& mu) { return ewsaoi_fifo(c3, {mu}); }, 2.5e-4);
    gap = 0.0;
    for (int i = 0; i < 3; ++i) gap = std::max(gap, std::abs(fifo3.spec.mu[i] - grid_f3.mu[i]));
    s.expect_le("fifo-mu-vs-grid-3", gap, 1e-3, "allocation vs mesh argmin, 3 streams");
}

void check_fifo_derivative(Suite& s) {
    double worst = 0.0;
    const double h = 1e-6;
    for (double p : {0.4, 0.7, 1.0}) {
        for (double lam : {0.05, 0.15, 0.3}) {
            for (double mu : {0.5, 0.7, 0.9}) {
                if (p * mu - lam < 0.05) continue;
                for (double w : {0.5, 2.0}) {
                    const double analytic = fifo_aoi_derivative(w, p, lam, mu, 2);
                    const double fd = oracles::central_difference(
                        [&](double x) { return w / 2.0 * fifo_stream_aoi(p, lam, x); }, mu, h);
                    worst = std::max(worst, std::abs(analytic - fd) / std::abs(fd));
                }
            }
        }
    }
    s.expect_le("fifo-marginal-cost-vs-fd", worst, 1e-4,
                "analytic derivative vs central difference");
}

void check_mc_oracle(Suite& s) {
    double worst_mean = 0.0, worst_mass = 0.0;
    for (double p : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        for (double lam : {0.2, 0.4, 0.6, 0.8, 1.0}) {
            for (double mu : {0.2, 0.4, 0.6, 0.8, 1.0}) {
                const double closed = 1.0 / (p * mu) + 1.0 / lam - 1.0;
                const double mc = mc_expected_aoi(p, lam, mu, 1e-6);
                worst_mean = std::max(worst_mean, std::abs(mc - closed));
                const auto dist = mc_stationary(p, lam, mu, 1e-6);
                double mass = 0.0;
                for (double q : dist.p_h) mass += q;
                worst_mass = std::max(worst_mass, std::abs(mass + dist.truncation_mass - 1.0));
            }
        }
    }
    s.expect_le("stationary-chain-mean", worst_mean, 1e-6,
                "truncated chain mean vs closed form on 5x5x5 grid");
    s.expect_le("stationary-chain-mass", worst_mass, 1e-12, "distribution normalization");
}

void check_path_identity(Suite& s, Depth depth) {
    const int runs = depth == Depth::Full ? 100 : 30;
    std::mt19937_64 g(19);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < runs; ++rep) {
        NetworkConfig c = random_config(g, 5);
        const auto discipline = static_cast<QueueDiscipline>(rep % 3);
        Policy policy;
        if (rep % 2 == 0) {
            RandomizedPolicySpec spec;
            double total = 0.0;
            for (int i = 0; i < c.n_streams; ++i) {
                spec.mu.push_back(0.05 + ud(g));
                total += spec.mu.back();
            }
            const double scale = (0.4 + 0.6 * ud(g)) / total;
            for (double& m : spec.mu) m *= scale;
            policy = Policy::stationary_randomized(spec);
        } else {
            std::vector<double> beta;
            for (int i = 0; i < c.n_streams; ++i) beta.push_back(0.1 + 5.0 * ud(g));
            policy = Policy::max_weight(beta);
        }
        const RunResult r = run(c, discipline, policy);
        for (double res : prop1_identity_check(r.stats, r.stats.slots))
            worst = std::max(worst, res);
    }
    s.expect_le("sample-path-age-identity", worst, 1e-9,
                "log reconstruction vs accumulated age, " + std::to_string(runs) + " runs");
}

void check_simulation_vs_closed_form(Suite& s, Depth depth) {
    const std::int64_t horizon = depth == Depth::Full ? 2'000'000 : 200'000;
    const int reps = depth == Depth::Full ? 5 : 3;
    const double tol = depth == Depth::Full ? 0.02 : 0.05;

    double worst = 0.0;
    for (double lambda : {0.05, 0.15}) {
        NetworkConfig c = reference_net4(lambda, horizon, 99);
        const auto spec_s = mu_single(c);
        const auto sim_s =
            replicate(c, QueueDiscipline::SinglePacket, Policy::stationary_randomized(spec_s), reps);
        worst = std::max(worst, std::abs(sim_s.mean - ewsaoi_single(c, spec_s)) /
                                    ewsaoi_single(c, spec_s));

        const auto spec_n = mu_noqueue(c);
        const auto sim_n =
            replicate(c, QueueDiscipline::NoQueue, Policy::stationary_randomized(spec_n), reps);
        worst = std::max(worst, std::abs(sim_n.mean - ewsaoi_noqueue(c, spec_n)) /
                                    ewsaoi_noqueue(c, spec_n));
    }
    s.expect_le("randomized-sim-vs-closed-form", worst, tol,
                "relative gap, single-packet and no-queue disciplines");
}

void check_policy_orderings(Suite& s, Depth depth) {
    const std::int64_t horizon = depth == Depth::Full ? 2'000'000 : 200'000;
    const int reps = depth == Depth::Full ? 10 : 3;

    bool ordered = true;
    std::ostringstream detail;
    for (double lambda : {0.05, 0.15}) {
        NetworkConfig c = reference_net4(lambda, horizon, 205);
        const double lb = lower_bound(c).value;

        const auto mw_s = replicate(c, QueueDiscipline::SinglePacket,
                                    Policy::max_weight(default_beta(c, QueueDiscipline::SinglePacket)),
                                    reps);
        const double rs = ewsaoi_single(c, mu_single(c));
        if (mw_s.mean > rs + 3.0 * mw_s.stderr_mean) {
            ordered = false;
            detail << "single lambda=" << lambda << ": max-weight " << mw_s.mean
                   << " > randomized " << rs << "; ";
        }
        if (mw_s.mean - 3.0 * mw_s.stderr_mean < lb) {
            ordered = false;
            detail << "single lambda=" << lambda << ": mean below lower bound " << lb << "; ";
        }

        const auto mw_n = replicate(c, QueueDiscipline::NoQueue,
                                    Policy::max_weight(default_beta(c, QueueDiscipline::NoQueue)),
                                    reps);
        const double rn = ewsaoi_noqueue(c, mu_noqueue(c));
        if (mw_n.mean > rn + 3.0 * mw_n.stderr_mean) {
            ordered = false;
            detail << "noqueue lambda=" << lambda << ": max-weight " << mw_n.mean
                   << " > randomized " << rn << "; ";
        }
        if (mw_n.mean - 3.0 * mw_n.stderr_mean < lb) {
            ordered = false;
            detail << "noqueue lambda=" << lambda << ": mean below lower bound " << lb << "; ";
        }
    }
    s.record("max-weight-dominance-and-bound", ordered,
             ordered ? "max-weight below its randomized baseline, above the lower bound"
                     : detail.str());

    // Discipline ordering at a stable arrival rate, matched policy class.
    NetworkConfig c = reference_net4(0.10, horizon, 31);
    const auto r_single =
        replicate(c, QueueDiscipline::SinglePacket, Policy::stationary_randomized(mu_single(c)), reps);
    const auto r_noq =
        replicate(c, QueueDiscipline::NoQueue, Policy::stationary_randomized(mu_noqueue(c)), reps);
    const auto r_fifo =
        replicate(c, QueueDiscipline::Fifo, Policy::stationary_randomized(mu_fifo(c).spec), reps);
    const double slack_n = 3.0 * (r_single.stderr_mean + r_noq.stderr_mean);
    const double slack_f = 3.0 * (r_single.stderr_mean + r_fifo.stderr_mean);
    const bool disc_ok = r_single.mean <= r_noq.mean + slack_n &&
                         r_single.mean <= r_fifo.mean + slack_f;
    std::ostringstream dd;
    dd << "single " << r_single.mean << ", noqueue " << r_noq.mean << ", fifo " << r_fifo.mean;
    s.record("single-packet-discipline-best", disc_ok, dd.str());
}

} // namespace

std::vector<CheckResult> run_all(Depth depth) {
    Suite s;
    check_lower_bound_grid(s);
    check_lower_bound_routes(s);
    check_mu_optimality(s);
    check_fifo_derivative(s);
    check_mc_oracle(s);
    check_path_identity(s, depth);
    check_simulation_vs_closed_form(s, depth);
    check_policy_orderings(s, depth);
    return s.results;
}

} // namespace aoisim::verify
