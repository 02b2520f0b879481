#include "gf/ode.hpp"

#include <algorithm>
#include <cmath>

#include "gf/errors.hpp"

namespace gf {

namespace {

// Dormand-Prince coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 4th-order embedded weights
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

} // namespace

Vec integrate(const OdeRhs& rhs, double t0, double t1, Vec y, const OdeConfig& cfg) {
    const double span = t1 - t0;
    if (span == 0.0) return y;
    const double dir = span > 0 ? 1.0 : -1.0;

    double t = t0;
    Vec k1 = rhs(t, y);
    if (!k1.allFinite()) throw IntegrationFailure("non-finite right-hand side at start");

    double h = cfg.initial_step != 0.0 ? std::abs(cfg.initial_step)
                                       : std::min(std::abs(span), 1e-2);
    h *= dir;

    for (long step = 0; step < cfg.max_steps; ++step) {
        if ((t - t1) * dir >= 0.0) return y;
        if ((t + h - t1) * dir > 0.0) h = t1 - t;

        Vec k2 = rhs(t + c2 * h, y + h * (a21 * k1));
        Vec k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        Vec k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        Vec k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Vec k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Vec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Vec k7 = rhs(t + h, y5);  // FSAL
        Vec y4 = y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        if (!y5.allFinite()) throw IntegrationFailure("non-finite state during integration");

        double err = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            double e = (y5[i] - y4[i]) / sc;
            err += e * e;
        }
        err = std::sqrt(err / static_cast<double>(y.size()));

        if (err <= 1.0) {
            t += h;
            y = std::move(y5);
            k1 = std::move(k7);
        }
        double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        factor = std::clamp(factor, 0.2, 5.0);
        h *= factor;
        if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
            throw IntegrationFailure("step size underflow");
    }
    throw IntegrationFailure("maximum step count exceeded");
}

} // namespace gf
