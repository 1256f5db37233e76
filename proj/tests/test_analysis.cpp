#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "aoisim/analysis.hpp"
#include "aoisim/oracles.hpp"
#include "aoisim/verify.hpp"
#include "helpers.hpp"

using namespace aoisim;
using doctest::Approx;

namespace {

NetworkConfig make(int n, std::vector<double> p, std::vector<double> lam, std::vector<double> w) {
    NetworkConfig c;
    c.n_streams = n;
    c.channel_reliability = std::move(p);
    c.arrival_rate = std::move(lam);
    c.weight = std::move(w);
    c.horizon = 100;
    c.seed = 1;
    return c;
}

double lb_objective(const NetworkConfig& c, const std::vector<double>& q) {
    double total = 0.0;
    for (int i = 0; i < c.n_streams; ++i) total += c.weight[i] * (1.0 / q[i] + 1.0);
    return total / (2.0 * c.n_streams);
}

double lb_throughput_sum(const NetworkConfig& c, const LowerBoundSolution& sol) {
    double s = 0.0;
    for (int i = 0; i < c.n_streams; ++i) s += sol.throughput[i] / c.channel_reliability[i];
    return s;
}

} // namespace

// --- lower bound ------------------------------------------------------------

TEST_CASE("lower bound on the saturated unit network is exactly 1") {
    const NetworkConfig c = make(1, {1.0}, {1.0}, {1.0});
    const LowerBoundSolution sol = lower_bound(c);
    CHECK(sol.value == 1.0);
    CHECK(sol.gamma_star == Approx(0.5).epsilon(1e-12));
    CHECK(sol.throughput[0] == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("slack channel constraint caps throughput at the arrival rates") {
    const NetworkConfig c = make(2, {1.0, 1.0}, {0.1, 0.1}, {1.0, 1.0});
    const LowerBoundSolution sol = lower_bound(c);
    CHECK(sol.gamma_star == 0.0);
    CHECK(sol.throughput[0] == Approx(0.1));
    CHECK(sol.throughput[1] == Approx(0.1));
    CHECK(sol.value == Approx(5.5).epsilon(1e-12));
}

TEST_CASE("four-stream benchmark lower bound") {
    const NetworkConfig c = verify::reference_net4(0.2, 100, 1);
    const LowerBoundSolution sol = lower_bound(c);
    // Exact solution: gamma = 7200/961, q = (31/240, 0.15, 0.1, 0.05). The
    // root search stops at |sum q/p - 1| < 1e-9, which bounds these gaps.
    CHECK(sol.value == Approx(12.204301075268817).epsilon(1e-8));
    CHECK(sol.gamma_star == Approx(7200.0 / 961.0).epsilon(1e-7));
    CHECK(sol.throughput[0] == Approx(31.0 / 240.0).epsilon(1e-7));
    CHECK(sol.throughput[1] == Approx(0.15).epsilon(1e-12));

    // The segment route hits the same solution to machine precision.
    const LowerBoundSolution exact = lower_bound_analytic(c);
    CHECK(exact.value == Approx(12.204301075268817).epsilon(1e-14));
    CHECK(exact.gamma_star == Approx(7200.0 / 961.0).epsilon(1e-14));

    // Independent mesh search over the feasible throughput region.
    const double grid = oracles::lower_bound_grid(c, 1e-4);
    CHECK(std::abs(sol.value - grid) < 1e-3);
}

TEST_CASE("multiplier saturates the channel or vanishes") {
    std::mt19937_64 g(101);
    for (int rep = 0; rep < 300; ++rep) {
        const NetworkConfig c = testutil::random_config(g);
        const LowerBoundSolution sol = lower_bound(c);
        double rate_sum = 0.0;
        for (int i = 0; i < c.n_streams; ++i)
            rate_sum += c.arrival_rate[i] / c.channel_reliability[i];
        if (sol.gamma_star == 0.0) {
            CHECK(rate_sum < 1.0 + 1e-9);
        } else {
            CHECK(lb_throughput_sum(c, sol) == Approx(1.0).epsilon(1e-9));
        }
        for (int i = 0; i < c.n_streams; ++i) {
            CHECK(sol.throughput[i] > 0.0);
            CHECK(sol.throughput[i] <= c.arrival_rate[i] + 1e-12);
            CHECK(sol.multipliers[i] >= 0.0);
        }
    }
}

TEST_CASE("bound dominates every feasible throughput vector") {
    std::mt19937_64 g(55);
    for (int rep = 0; rep < 200; ++rep) {
        const NetworkConfig c = testutil::random_config(g);
        const double lb = lower_bound(c).value;
        for (int k = 0; k < 20; ++k) {
            const auto q = testutil::random_feasible_throughput(g, c);
            CHECK(lb_objective(c, q) >= lb - 1e-9);
        }
    }
}

TEST_CASE("bisection and segment solve agree") {
    std::mt19937_64 g(77);
    for (int rep = 0; rep < 300; ++rep) {
        const NetworkConfig c = testutil::random_config(g);
        const auto a = lower_bound(c);
        const auto b = lower_bound_analytic(c);
        CHECK(a.value == Approx(b.value).epsilon(1e-9));
        for (int i = 0; i < c.n_streams; ++i)
            CHECK(a.throughput[i] == Approx(b.throughput[i]).epsilon(1e-7));
    }
}

TEST_CASE("small meshes reproduce the water-filling value") {
    std::mt19937_64 g(13);
    for (int rep = 0; rep < 3; ++rep) {
        const NetworkConfig c = testutil::random_config(g, 3);
        const double algo = lower_bound(c).value;
        const double grid = oracles::lower_bound_grid(c, 1e-4);
        CHECK(std::abs(algo - grid) < 1e-3);
    }
}

// --- single-packet queues -----------------------------------------------------

TEST_CASE("single-packet allocation is uniform on symmetric networks") {
    const NetworkConfig c = make(4, {0.6, 0.6, 0.6, 0.6}, {0.3, 0.3, 0.3, 0.3},
                                 {2.0, 2.0, 2.0, 2.0});
    const auto spec = mu_single(c);
    for (double m : spec.mu) CHECK(m == Approx(0.25).epsilon(1e-12));
}

TEST_CASE("two-stream single-packet allocation") {
    const NetworkConfig c = make(2, {1.0 / 3.0, 1.0}, {0.9, 0.9}, {1.0, 1.0});
    const auto spec = mu_single(c);
    const double root3 = std::sqrt(3.0);
    CHECK(spec.mu[0] == Approx(root3 / (root3 + 1.0)).epsilon(1e-12)); // ~0.6340
    CHECK(spec.mu[1] == Approx(1.0 / (root3 + 1.0)).epsilon(1e-12));   // ~0.3660

    // Optimality against a fine mesh on the mu simplex.
    const auto grid = oracles::best_mu_on_simplex(
        2, [&](const std::vector<double>& mu) { return ewsaoi_single(c, {mu}); }, 1e-5);
    CHECK(std::abs(spec.mu[0] - grid.mu[0]) < 1e-3);
}

TEST_CASE("single-packet allocation ignores arrival rates") {
    std::mt19937_64 g(9);
    std::uniform_real_distribution<double> ld(0.05, 1.0);
    NetworkConfig c = make(5, {0.3, 0.5, 0.7, 0.9, 1.0}, {0.5, 0.5, 0.5, 0.5, 0.5},
                           {1.0, 2.0, 3.0, 4.0, 5.0});
    const auto reference = mu_single(c);
    for (int rep = 0; rep < 100; ++rep) {
        for (double& lam : c.arrival_rate) lam = ld(g);
        const auto spec = mu_single(c);
        for (int i = 0; i < c.n_streams; ++i) CHECK(spec.mu[i] == reference.mu[i]);
    }
}

TEST_CASE("single-packet objective values") {
    const NetworkConfig unit = make(1, {1.0}, {1.0}, {1.0});
    CHECK(ewsaoi_single(unit, {std::vector<double>{1.0}}) == Approx(1.0));

    const NetworkConfig c = make(1, {0.5}, {0.25}, {1.0});
    const double value = ewsaoi_single(c, {std::vector<double>{1.0}});
    CHECK(value == Approx(5.0).epsilon(1e-12));
    // The stationary chain oracle gives the same stream mean.
    CHECK(value == Approx(mc_expected_aoi(0.5, 0.25, 1.0, 1e-9)).epsilon(1e-6));

    CHECK_THROWS_AS(ewsaoi_single(c, {std::vector<double>{-0.1}}), std::domain_error);
    CHECK_THROWS_AS(ewsaoi_single(make(2, {1, 1}, {1, 1}, {1, 1}),
                                  {std::vector<double>{0.8, 0.8}}),
                    std::invalid_argument);
}

TEST_CASE("optimal allocation beats random feasible ones") {
    std::mt19937_64 g(31);
    for (int rep = 0; rep < 10; ++rep) {
        const NetworkConfig c = testutil::random_config(g, 6);
        const double best_single = ewsaoi_single(c, mu_single(c));
        const double best_noq = ewsaoi_noqueue(c, mu_noqueue(c));
        for (int k = 0; k < 100; ++k) {
            const auto spec = testutil::random_spec(g, c.n_streams);
            CHECK(best_single <= ewsaoi_single(c, spec) + 1e-9);
            CHECK(best_noq <= ewsaoi_noqueue(c, spec) + 1e-9);
        }
    }
}

TEST_CASE("optimal single-packet value stays below four times the bound") {
    std::mt19937_64 g(131);
    for (int rep = 0; rep < 1000; ++rep) {
        const NetworkConfig c = testutil::random_config(g);
        CHECK(ewsaoi_single(c, mu_single(c)) < 4.0 * lower_bound(c).value);
    }
}

// --- no queues ----------------------------------------------------------------

TEST_CASE("no-queue allocation") {
    const NetworkConfig sym = make(3, {0.5, 0.5, 0.5}, {0.4, 0.4, 0.4}, {1.0, 1.0, 1.0});
    for (double m : mu_noqueue(sym).mu) CHECK(m == Approx(1.0 / 3.0).epsilon(1e-12));

    const NetworkConfig c = make(2, {1.0, 1.0}, {1.0, 0.25}, {1.0, 1.0});
    const auto spec = mu_noqueue(c);
    CHECK(spec.mu[0] == Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(spec.mu[1] == Approx(2.0 / 3.0).epsilon(1e-12));
    // Optimal objective: (1/2)(1 + 2)^2 = 4.5.
    CHECK(ewsaoi_noqueue(c, spec) == Approx(4.5).epsilon(1e-12));
    const auto grid = oracles::best_mu_on_simplex(
        2, [&](const std::vector<double>& mu) { return ewsaoi_noqueue(c, {mu}); }, 1e-5);
    CHECK(std::abs(spec.mu[0] - grid.mu[0]) < 1e-3);
}

TEST_CASE("no-queue equals single-packet under saturated arrivals") {
    const NetworkConfig c = make(3, {0.4, 0.7, 1.0}, {1.0, 1.0, 1.0}, {2.0, 1.0, 3.0});
    const auto s = mu_single(c);
    const auto n = mu_noqueue(c);
    for (int i = 0; i < 3; ++i) CHECK(s.mu[i] == Approx(n.mu[i]).epsilon(1e-12));
    CHECK(ewsaoi_single(c, s) == Approx(ewsaoi_noqueue(c, n)).epsilon(1e-12));
}

TEST_CASE("no-queue objective values") {
    CHECK(ewsaoi_noqueue(make(1, {1.0}, {1.0}, {1.0}), {std::vector<double>{1.0}}) ==
          Approx(1.0));
    // Renewal rate p*mu*lambda = 0.25 -> mean age 4.
    CHECK(ewsaoi_noqueue(make(1, {0.5}, {0.5}, {1.0}), {std::vector<double>{1.0}}) ==
          Approx(4.0));
    CHECK_THROWS_AS(ewsaoi_noqueue(make(1, {0.5}, {0.5}, {1.0}), {std::vector<double>{0.0}}),
                    std::domain_error);
}

// --- FIFO queues ----------------------------------------------------------------

TEST_CASE("stable fifo queue closed forms") {
    CHECK(fifo_stream_aoi(0.5, 0.25, 1.0) == Approx(6.5).epsilon(1e-12));
    CHECK(fifo_backlog(0.5, 0.25, 1.0) == Approx(0.5).epsilon(1e-12));
    CHECK(fifo_backlog(1.0, 0.5, 1.0) == Approx(0.0)); // deterministic service
    CHECK(fifo_backlog(0.5, 0.49, 1.0) == Approx(24.5).epsilon(1e-9));

    // Vanishing queueing term at full service rate.
    CHECK(fifo_stream_aoi(1.0, 0.999, 1.0) == Approx(1.0 + 1.0 / 0.999).epsilon(1e-12));

    // Boundary is rejected, and the age blows up approaching it.
    CHECK_THROWS_AS(fifo_stream_aoi(1.0, 1.0, 1.0), InstabilityError);
    CHECK_THROWS_AS(fifo_backlog(0.5, 0.6, 1.0), InstabilityError);
    CHECK(fifo_stream_aoi(0.5, 0.4999, 1.0) > 1000.0);
}

TEST_CASE("fifo marginal cost matches finite differences") {
    for (double p : {0.4, 0.8, 1.0}) {
        for (double lam : {0.1, 0.3}) {
            for (double mu : {0.6, 0.9}) {
                if (p * mu - lam < 0.05) continue;
                const double fd = oracles::central_difference(
                    [&](double x) { return 1.5 / 3.0 * fifo_stream_aoi(p, lam, x); }, mu, 1e-6);
                const double analytic = fifo_aoi_derivative(1.5, p, lam, mu, 3);
                CHECK(std::abs(analytic - fd) / std::abs(fd) < 1e-4);
            }
        }
    }
}

TEST_CASE("fifo allocation on the two-stream benchmark") {
    const NetworkConfig c = verify::reference_net2(0.2, 100, 1);
    const FifoOptResult result = mu_fifo(c);
    CHECK(result.converged);
    CHECK(result.spec.mu[0] + result.spec.mu[1] == Approx(1.0).epsilon(1e-9));
    // Frozen from the mesh-verified solution (delta = 1e-6).
    CHECK(result.spec.mu[0] == Approx(0.8139118).epsilon(1e-6));
    CHECK(result.spec.mu[1] == Approx(0.1860882).epsilon(1e-6));
    CHECK(result.ewsaoi == Approx(17.7440543).epsilon(1e-7));
    for (int i = 0; i < 2; ++i) {
        CHECK(c.channel_reliability[i] * result.spec.mu[i] >=
              c.arrival_rate[i] + result.delta - 1e-12);
    }
}

TEST_CASE("fifo allocation trivial cases") {
    NetworkConfig one = make(1, {0.9}, {0.3}, {1.0});
    const FifoOptResult r1 = mu_fifo(one);
    CHECK(r1.spec.mu[0] == 1.0);

    // Symmetric network splits evenly.
    const NetworkConfig sym = make(4, {0.8, 0.8, 0.8, 0.8}, {0.1, 0.1, 0.1, 0.1},
                                   {1.0, 1.0, 1.0, 1.0});
    const FifoOptResult rs = mu_fifo(sym);
    for (double m : rs.spec.mu) CHECK(m == Approx(0.25).epsilon(1e-9));
}

TEST_CASE("fifo allocation rejects infeasible arrival rates") {
    const NetworkConfig c = verify::reference_net2(0.35, 100, 1);
    CHECK_THROWS_WITH_AS(mu_fifo(c), doctest::Contains("infeasible"), InfeasibilityError);
}

TEST_CASE("naive split cannot stabilize the two-stream benchmark at 0.25") {
    const NetworkConfig c = verify::reference_net2(0.25, 100, 1);
    const RandomizedPolicySpec naive{std::vector<double>{0.5, 0.5}};
    // Stream 0 has service rate 1/6 < 0.25.
    CHECK_THROWS_WITH_AS(ewsaoi_fifo(c, naive), doctest::Contains("stream 0"),
                         InstabilityError);
}

// --- stability margin -----------------------------------------------------------

TEST_CASE("stability margin thresholds of the benchmarks") {
    // Four-stream benchmark: margin crosses zero at lambda = 12/77.
    const double threshold4 = 12.0 / 77.0;
    CHECK(stability_margin(verify::reference_net4(threshold4, 1, 1)) ==
          Approx(0.0).epsilon(1e-12));
    CHECK(stability_margin(verify::reference_net4(threshold4 - 0.01, 1, 1)) > 0.0);
    CHECK(stability_margin(verify::reference_net4(threshold4 + 0.01, 1, 1)) < 0.0);

    // Two-stream benchmark: threshold 3/10.
    CHECK(stability_margin(verify::reference_net2(0.3, 1, 1)) == Approx(0.0).epsilon(1e-12));
    CHECK(stability_margin(verify::reference_net2(0.29, 1, 1)) > 0.0);

    CHECK(stability_margin(make(1, {0.7}, {0.7}, {1.0})) == Approx(0.0));
}

// --- stationary chain oracle ------------------------------------------------------

TEST_CASE("stationary chain trivial renewal") {
    const McStationary dist = mc_stationary(1.0, 1.0, 1.0, 1e-9);
    REQUIRE(dist.p_h.size() >= 1);
    CHECK(dist.p_h[0] == Approx(1.0));
    CHECK(dist.p_10 == Approx(1.0));
    CHECK(mc_expected_aoi(1.0, 1.0, 1.0, 1e-9) == Approx(1.0));
}

TEST_CASE("stationary chain agrees with the closed form") {
    CHECK(std::abs(mc_expected_aoi(0.5, 0.25, 1.0, 1e-6) - 5.0) < 1e-6);
    for (double p : {0.3, 0.6, 1.0}) {
        for (double lam : {0.2, 0.7, 1.0}) {
            for (double mu : {0.25, 0.8, 1.0}) {
                const double closed = 1.0 / (p * mu) + 1.0 / lam - 1.0;
                CHECK(std::abs(mc_expected_aoi(p, lam, mu, 1e-6) - closed) < 1e-6);
            }
        }
    }
}

TEST_CASE("stationary chain normalization and corner probability") {
    for (double p : {0.25, 0.75}) {
        for (double lam : {0.3, 0.9}) {
            const McStationary dist = mc_stationary(p, lam, 0.5, 1e-8);
            CHECK(dist.p_10 == Approx(lam * lam * p * 0.5).epsilon(1e-12));
            double mass = 0.0;
            for (double q : dist.p_h) mass += q;
            CHECK(std::abs(mass + dist.truncation_mass - 1.0) < 1e-12);
        }
    }
}
