#pragma once

#include <functional>

#include "gf/linalg.hpp"

namespace gf {

struct OdeConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double initial_step = 0.0;  // 0: choose automatically
    long max_steps = 2'000'000;
};

using OdeRhs = std::function<Vec(double, const Vec&)>;

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)), deterministic step
// acceptance. Integrates y' = rhs(t, y) from t0 to t1. Throws
// IntegrationFailure when step control cannot meet the tolerance.
Vec integrate(const OdeRhs& rhs, double t0, double t1, Vec y0, const OdeConfig& cfg = {});

} // namespace gf
