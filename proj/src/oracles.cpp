#include "aoisim/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aoisim::oracles {

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

namespace {

double lb_objective(const NetworkConfig& c, const std::vector<double>& q) {
    double total = 0.0;
    for (int i = 0; i < c.n_streams; ++i) total += c.weight[i] * (1.0 / q[i] + 1.0);
    return total / (2.0 * c.n_streams);
}

// Index-based grid over [lo, hi] that always visits hi itself; rate caps are
// boundary optima, so they must be exact grid points.
void for_grid(double lo, double hi, double mesh, const std::function<void(double)>& fn) {
    if (hi < lo) return;
    const auto steps = static_cast<long long>(std::floor((hi - lo) / mesh));
    for (long long k = 0; k <= steps; ++k) fn(lo + static_cast<double>(k) * mesh);
    if (lo + static_cast<double>(steps) * mesh < hi) fn(hi);
}

// Search the face sum q_i/p_i = 1 with the last coordinate eliminated; the
// objective decreases in every coordinate, so when the full-rate point is
// infeasible the optimum lies on that face.
double lb_face_search(const NetworkConfig& c, const std::vector<double>& lo,
                      const std::vector<double>& hi, double mesh) {
    const int n = c.n_streams;
    const int last = n - 1;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> q(static_cast<std::size_t>(n));

    const auto close_last = [&]() {
        double budget = 1.0;
        for (int i = 0; i < last; ++i) budget -= q[i] / c.channel_reliability[i];
        const double q_last = budget * c.channel_reliability[last];
        if (q_last <= 0.0 || q_last > c.arrival_rate[last]) return;
        q[static_cast<std::size_t>(last)] = q_last;
        best = std::min(best, lb_objective(c, q));
    };

    if (n == 1) {
        q[0] = std::min(c.arrival_rate[0], c.channel_reliability[0]);
        return lb_objective(c, q);
    }
    if (n == 2) {
        for_grid(lo[0], hi[0], mesh, [&](double q0) {
            q[0] = q0;
            close_last();
        });
        return best;
    }
    if (n == 3) {
        for_grid(lo[0], hi[0], mesh, [&](double q0) {
            q[0] = q0;
            for_grid(lo[1], hi[1], mesh, [&](double q1) {
                q[1] = q1;
                close_last();
            });
        });
        return best;
    }
    // n == 4
    for_grid(lo[0], hi[0], mesh, [&](double q0) {
        q[0] = q0;
        for_grid(lo[1], hi[1], mesh, [&](double q1) {
            q[1] = q1;
            for_grid(lo[2], hi[2], mesh, [&](double q2) {
                q[2] = q2;
                close_last();
            });
        });
    });
    return best;
}

// Best grid point of the 4-stream face search, for refinement windows.
std::vector<double> lb_face_argmin4(const NetworkConfig& c, const std::vector<double>& lo,
                                    const std::vector<double>& hi, double mesh) {
    const int last = 3;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> q(4), arg(4, 0.0);
    for_grid(lo[0], hi[0], mesh, [&](double q0) {
        q[0] = q0;
        for_grid(lo[1], hi[1], mesh, [&](double q1) {
            q[1] = q1;
            for_grid(lo[2], hi[2], mesh, [&](double q2) {
                q[2] = q2;
                double budget = 1.0;
                for (int i = 0; i < last; ++i) budget -= q[i] / c.channel_reliability[i];
                const double q_last = budget * c.channel_reliability[last];
                if (q_last <= 0.0 || q_last > c.arrival_rate[last]) return;
                q[3] = q_last;
                const double v = lb_objective(c, q);
                if (v < best) {
                    best = v;
                    arg = q;
                }
            });
        });
    });
    return arg;
}

} // namespace

double lower_bound_grid(const NetworkConfig& config, double mesh) {
    config.validate();
    const int n = config.n_streams;
    if (n > 4) throw std::invalid_argument("lower_bound_grid supports n_streams <= 4");

    double rate_sum = 0.0;
    for (int i = 0; i < n; ++i)
        rate_sum += config.arrival_rate[i] / config.channel_reliability[i];
    if (rate_sum <= 1.0) return lb_objective(config, config.arrival_rate);

    std::vector<double> lo(static_cast<std::size_t>(n), mesh);
    std::vector<double> hi = config.arrival_rate;
    if (n <= 3) return lb_face_search(config, lo, hi, mesh);

    // Coarse pass, then the requested mesh inside a window around the
    // coarse argmin.
    const double coarse = std::max(mesh, 2e-3);
    std::vector<double> lo_c(static_cast<std::size_t>(n), coarse);
    const std::vector<double> center = lb_face_argmin4(config, lo_c, hi, coarse);
    std::vector<double> lo_r(static_cast<std::size_t>(n)), hi_r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        lo_r[i] = std::max(mesh, center[i] - 3.0 * coarse);
        hi_r[i] = std::min(config.arrival_rate[i], center[i] + 3.0 * coarse);
    }
    return lb_face_search(config, lo_r, hi_r, mesh);
}

MeshResult best_mu_on_simplex(int n_streams,
                              const std::function<double(const std::vector<double>&)>& objective,
                              double mesh, const std::vector<double>& mu_min) {
    if (n_streams < 1 || n_streams > 3)
        throw std::invalid_argument("best_mu_on_simplex supports n_streams in 1..3");
    const auto lower = [&](int i) {
        return mu_min.empty() ? mesh : std::max(mesh, mu_min[static_cast<std::size_t>(i)]);
    };

    MeshResult best;
    best.value = std::numeric_limits<double>::infinity();
    const auto consider = [&](const std::vector<double>& mu) {
        try {
            const double v = objective(mu);
            if (v < best.value) {
                best.value = v;
                best.mu = mu;
            }
        } catch (const std::exception&) {
            // infeasible point; skip
        }
    };

    if (n_streams == 1) {
        consider({1.0});
        return best;
    }
    if (n_streams == 2) {
        for_grid(lower(0), 1.0 - lower(1), mesh, [&](double m0) { consider({m0, 1.0 - m0}); });
        return best;
    }
    const double min1 = lower(1), min2 = lower(2);
    for_grid(lower(0), 1.0 - min1 - min2, mesh, [&](double m0) {
        for_grid(min1, 1.0 - m0 - min2, mesh,
                 [&](double m1) { consider({m0, m1, 1.0 - m0 - m1}); });
    });
    return best;
}

} // namespace aoisim::oracles
