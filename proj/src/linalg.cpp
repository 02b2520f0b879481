#include "gf/linalg.hpp"

#include <cmath>

namespace gf {

namespace {

// Generalized golden ratio: unique positive root of x^{d+1} = x + 1.
double phi_d(int d) {
    double x = 1.5;
    for (int i = 0; i < 64; ++i) x = std::pow(1.0 + x, 1.0 / (d + 1));
    return x;
}

} // namespace

std::vector<Vec> sphere_samples(int dim, int count, std::uint64_t seed) {
    const int u_dim = dim + (dim % 2);  // Box-Muller consumes pairs
    const double g = phi_d(u_dim);
    std::vector<double> alpha(u_dim);
    for (int i = 0; i < u_dim; ++i) alpha[i] = std::fmod(std::pow(1.0 / g, i + 1), 1.0);

    std::vector<Vec> out;
    out.reserve(count);
    const double offset = 0.5 + 1e-3 * static_cast<double>(seed % 997);
    for (int k = 1; out.size() < static_cast<std::size_t>(count); ++k) {
        Vec gauss(u_dim);
        bool ok = true;
        for (int i = 0; i < u_dim; i += 2) {
            double u1 = std::fmod(offset + k * alpha[i], 1.0);
            double u2 = std::fmod(offset + k * alpha[i + 1], 1.0);
            if (u1 < 1e-12) {
                ok = false;
                break;
            }
            double r = std::sqrt(-2.0 * std::log(u1));
            gauss[i] = r * std::cos(2.0 * M_PI * u2);
            gauss[i + 1] = r * std::sin(2.0 * M_PI * u2);
        }
        if (!ok) continue;
        Vec v = gauss.head(dim);
        double norm = v.norm();
        if (norm < 1e-8) continue;
        out.push_back(v / norm);
    }
    return out;
}

Mat tangent_basis(const Vec& unit) {
    const Eigen::Index d = unit.size();
    Eigen::HouseholderQR<Mat> qr(unit);
    Mat Q = qr.householderQ() * Mat::Identity(d, d);
    // first column is +-unit; the rest span the complement
    return Q.rightCols(d - 1);
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    threads = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace gf
