#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace gf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Complex structure J on R^{2n}, coordinates (x_1..x_n, y_1..y_n): (x,y) -> (-y,x).
inline Vec apply_J(const Vec& v) {
    const Eigen::Index n = v.size() / 2;
    Vec out(v.size());
    out.head(n) = -v.tail(n);
    out.tail(n) = v.head(n);
    return out;
}

inline Mat J_matrix(int two_n) {
    const int n = two_n / 2;
    Mat J = Mat::Zero(two_n, two_n);
    J.topRightCorner(n, n) = -Mat::Identity(n, n);
    J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    return J;
}

// Standard symplectic form, omega(u,v) = <Ju, v>; omega(dx_1, dy_1) = +1.
inline double omega(const Vec& u, const Vec& v) { return apply_J(u).dot(v); }

// Rotation e^{tJ} applied blockwise: cos(t) v + sin(t) Jv.
inline Vec rotate_J(double t, const Vec& v) { return std::cos(t) * v + std::sin(t) * apply_J(v); }

// Hermitian pairing <u,v>_C = <u,v> + i <Ju,v> under z_j = x_j + i y_j.
inline std::pair<double, double> complex_pairing(const Vec& u, const Vec& v) {
    return {u.dot(v), apply_J(u).dot(v)};
}

// Deterministic low-discrepancy points on the unit sphere of R^dim.
// Additive recurrence (R_d sequence) fed through Box-Muller.
std::vector<Vec> sphere_samples(int dim, int count, std::uint64_t seed = 0);

// Orthonormal basis of the orthogonal complement of a unit vector (dim x (dim-1)).
Mat tangent_basis(const Vec& unit);

// Ordered parallel map over [0, n); deterministic result layout.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

} // namespace gf
