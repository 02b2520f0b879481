#include "gf/symplectization.hpp"

#include <Eigen/LU>
#include <cmath>

#include "gf/errors.hpp"

namespace gf {

std::pair<Vec, Vec> tau(const Vec& z, const Vec& Z) {
    return {0.5 * (z + Z), apply_J(z - Z)};
}

std::pair<Vec, Vec> tau_inv(const Vec& q, const Vec& p) {
    const Vec Jp = apply_J(p);
    return {q - 0.5 * Jp, q + 0.5 * Jp};
}

LinearSymplectomorphism::LinearSymplectomorphism(Mat M, double tol) : M_(std::move(M)) {
    if (M_.rows() != M_.cols() || M_.rows() % 2 != 0)
        throw DimensionMismatch("symplectomorphism matrix must be 2n x 2n");
    const Mat J = J_matrix(static_cast<int>(M_.rows()));
    if ((M_.transpose() * J * M_ - J).cwiseAbs().maxCoeff() > tol)
        throw Error("matrix does not preserve the symplectic form");
}

LiftedMap::LiftedMap(Contactomorphism phi) : phi_(std::move(phi)) {}

Vec LiftedMap::evaluate(const Vec& z) const {
    const double r = z.norm();
    if (r == 0.0) return Vec::Zero(z.size());
    if (phi_.is_unitary()) return phi_.matrix() * z;
    auto [p, g] = phi_.apply_with_factor(SpherePoint(z));
    return r * std::exp(-0.5 * g) * p.coords();
}

Mat LiftedMap::jacobian(const Vec& z) const {
    const double r = z.norm();
    if (r < 1e-8) throw JacobianUnavailable("lift is only Lipschitz near 0; Jacobian rejected");
    if (phi_.is_unitary()) return phi_.matrix();
    // D \tilde S phi is 0-homogeneous: evaluate at z/|z| via the flow's
    // variational equations.
    LiftedFlowResult res =
        lifted_flow(phi_.hamiltonian(), phi_.time(), z / r, true, phi_.ode_config());
    return *res.jacobian;
}

LinearSymplectomorphism LiftedMap::linear() const {
    if (!phi_.is_unitary()) throw Error("linear view exists only for unitary kinds");
    return LinearSymplectomorphism(phi_.matrix());
}

std::function<double(const Vec&, double)> lift_hamiltonian(const HamSpec& H) {
    HamSpec copy = H;
    return [copy](const Vec& z, double t) { return copy.lifted_value(z, t); };
}

QuadForm cayley_genfun(const LinearSymplectomorphism& Phi, double tol_sing) {
    const Mat& M = Phi.matrix();
    const int d = Phi.dim();
    const Mat A = Mat::Identity(d, d) + M;
    Eigen::FullPivLU<Mat> lu(A);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < tol_sing)
        throw NearIdentityMinusOne("Id + Phi is singular; no simple generating form of this shape");
    const Mat J = J_matrix(d);
    Mat S = J * (Mat::Identity(d, d) - M) * lu.inverse();
    const double asym = (S - S.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10) throw Error("Cayley form unexpectedly asymmetric");
    return QuadForm(0.5 * (S + S.transpose()), 1e-9);
}

} // namespace gf
