#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "aoisim/policies.hpp"
#include "aoisim/sim.hpp"
#include "aoisim/verify.hpp"

using namespace aoisim;
using doctest::Approx;

namespace {

NetworkConfig uniform_net(int n, double p = 1.0) {
    NetworkConfig c;
    c.n_streams = n;
    c.channel_reliability.assign(n, p);
    c.arrival_rate.assign(n, 0.5);
    c.weight.assign(n, 1.0);
    c.horizon = 100;
    c.seed = 7;
    return c;
}

StreamObservation obs(std::int64_t aoi, std::optional<std::int64_t> z) {
    StreamObservation o;
    o.aoi = aoi;
    o.system_time = z;
    return o;
}

} // namespace

TEST_CASE("max-weight picks the largest age reduction") {
    // Both streams hold a packet; with unit beta*p the rewards are the age
    // drops 50-30=20 and 40-10=30, so the second stream wins.
    NetworkConfig c = uniform_net(2);
    Policy mw = Policy::max_weight({1.0, 1.0});
    std::vector<StreamObservation> observations{obs(50, 30), obs(40, 10)};
    CHECK(decide(mw, c, observations, 0.0) == 1);
}

TEST_CASE("max-weight idles only when every queue is empty") {
    NetworkConfig c = uniform_net(3);
    Policy mw = Policy::max_weight({1.0, 1.0, 1.0});
    std::vector<StreamObservation> empty{obs(5, std::nullopt), obs(9, std::nullopt),
                                         obs(2, std::nullopt)};
    CHECK(!decide(mw, c, empty, 0.0).has_value());

    std::vector<StreamObservation> one{obs(5, std::nullopt), obs(9, 4), obs(2, std::nullopt)};
    CHECK(decide(mw, c, one, 0.0) == 1);
}

TEST_CASE("max-weight breaks ties toward the lowest index") {
    NetworkConfig c = uniform_net(3);
    Policy mw = Policy::max_weight({1.0, 1.0, 1.0});
    // Identical rewards 10 for streams 1 and 2; stream 0 offers only 4.
    std::vector<StreamObservation> observations{obs(4, 0), obs(12, 2), obs(12, 2)};
    CHECK(decide(mw, c, observations, 0.0) == 1);
}

TEST_CASE("degenerate randomized policy always picks its only stream") {
    NetworkConfig c = uniform_net(2);
    Policy p;
    p.kind = Policy::Kind::StationaryRandomized;
    p.spec.mu = {1.0, 0.0};
    std::vector<StreamObservation> observations{obs(1, std::nullopt), obs(1, std::nullopt)};
    for (double u : {0.0, 0.3, 0.7, 0.999999}) CHECK(decide(p, c, observations, u) == 0);
}

TEST_CASE("randomized selection frequencies follow the probabilities") {
    NetworkConfig c = uniform_net(2);
    Policy p = Policy::stationary_randomized({std::vector<double>{0.3, 0.5}});
    std::vector<StreamObservation> observations{obs(1, 1), obs(1, 1)};

    std::mt19937_64 g(2024);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    const int draws = 1'000'000;
    int counts[3] = {0, 0, 0};
    for (int k = 0; k < draws; ++k) {
        const auto pick = decide(p, c, observations, ud(g));
        ++counts[pick ? *pick : 2];
    }
    const auto freq_ok = [&](int count, double prob) {
        const double se = std::sqrt(prob * (1.0 - prob) / draws);
        return std::abs(static_cast<double>(count) / draws - prob) <= 3.0 * se;
    };
    CHECK(freq_ok(counts[0], 0.3));
    CHECK(freq_ok(counts[1], 0.5));
    CHECK(freq_ok(counts[2], 0.2)); // idle mass
}

TEST_CASE("naive policy is the uniform randomized split") {
    Policy p = Policy::naive(4);
    CHECK(p.kind == Policy::Kind::Naive);
    for (double m : p.spec.mu) CHECK(m == Approx(0.25));
    CHECK(p.describe() == "naive");
}

TEST_CASE("max-weight decisions are invariant under beta rescaling") {
    NetworkConfig c = verify::reference_net4(0.12, 20'000, 9);
    const auto beta = default_beta(c, QueueDiscipline::SinglePacket);
    for (double scale : {2.0, 10.0}) {
        std::vector<double> scaled = beta;
        for (double& b : scaled) b *= scale;
        const RunResult base = run(c, QueueDiscipline::SinglePacket, Policy::max_weight(beta));
        const RunResult other = run(c, QueueDiscipline::SinglePacket, Policy::max_weight(scaled));
        CHECK(base.ewsaoi == other.ewsaoi);
        for (int i = 0; i < c.n_streams; ++i) {
            CHECK(base.stats.streams[i].deliveries == other.stats.streams[i].deliveries);
        }
    }
}

TEST_CASE("decision sequences are reproducible for a fixed seed") {
    NetworkConfig c = verify::reference_net4(0.15, 10'000, 33);
    const RunResult a = run(c, QueueDiscipline::Fifo, Policy::naive(4));
    const RunResult b = run(c, QueueDiscipline::Fifo, Policy::naive(4));
    CHECK(a.ewsaoi == b.ewsaoi);
    for (int i = 0; i < 4; ++i)
        CHECK(a.stats.streams[i].deliveries == b.stats.streams[i].deliveries);
}

TEST_CASE("default max-weight tuning") {
    SUBCASE("symmetric single-packet network is uniform") {
        NetworkConfig c = uniform_net(4, 0.5);
        c.weight.assign(4, 2.0);
        const auto beta = default_beta(c, QueueDiscipline::SinglePacket);
        for (double b : beta) CHECK(b == Approx(2.0 / (0.5 * 0.25)).epsilon(1e-12)); // N*w/p
    }
    SUBCASE("two-stream benchmark values") {
        NetworkConfig c = verify::reference_net2(0.2, 100, 1);
        const auto beta = default_beta(c, QueueDiscipline::SinglePacket);
        const double root3 = std::sqrt(3.0);
        CHECK(beta[0] == Approx(3.0 + root3).epsilon(1e-12));
        CHECK(beta[1] == Approx(1.0 + root3).epsilon(1e-12));
    }
    SUBCASE("no-queue tuning matches single-packet under saturated arrivals") {
        NetworkConfig c = uniform_net(3, 0.8);
        c.arrival_rate.assign(3, 1.0);
        c.weight = {1.0, 2.0, 3.0};
        const auto a = default_beta(c, QueueDiscipline::SinglePacket);
        const auto b = default_beta(c, QueueDiscipline::NoQueue);
        for (int i = 0; i < 3; ++i) CHECK(a[i] == Approx(b[i]).epsilon(1e-12));
    }
    SUBCASE("fifo tuning propagates infeasibility") {
        NetworkConfig c = verify::reference_net2(0.35, 100, 1);
        CHECK_THROWS_AS(default_beta(c, QueueDiscipline::Fifo), InfeasibilityError);
    }
}

TEST_CASE("policy validation") {
    NetworkConfig c = uniform_net(2);
    Policy bad = Policy::max_weight({1.0});
    CHECK_THROWS_AS(bad.validate(c), std::invalid_argument);
    bad = Policy::max_weight({1.0, -2.0});
    CHECK_THROWS_AS(bad.validate(c), std::invalid_argument);
    Policy overfull = Policy::stationary_randomized({std::vector<double>{0.7, 0.7}});
    CHECK_THROWS_AS(overfull.validate(c), std::invalid_argument);
    Policy ok = Policy::stationary_randomized({std::vector<double>{0.7, 0.2}});
    CHECK_NOTHROW(ok.validate(c));
    CHECK(ok.spec.idle_mass() == Approx(0.1));
}
