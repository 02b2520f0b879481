#pragma once

#include <functional>

#include "gf/contact.hpp"
#include "gf/quadform.hpp"

namespace gf {

// tau identifies the signed product R^{2n} x R^{2n} with T* R^{2n}:
// tau(z, Z) = ((z+Z)/2, J(z-Z)); the diagonal maps to the zero section.
std::pair<Vec, Vec> tau(const Vec& z, const Vec& Z);
std::pair<Vec, Vec> tau_inv(const Vec& q, const Vec& p);

// 2n x 2n matrix with omega(M u, M v) = omega(u, v), validated entrywise.
class LinearSymplectomorphism {
public:
    explicit LinearSymplectomorphism(Mat M, double tol = 1e-12);
    const Mat& matrix() const { return M_; }
    int dim() const { return static_cast<int>(M_.rows()); }

private:
    Mat M_;
};

// Positively 1-homogeneous lift \tilde S phi(z) = |z| e^{-g/2} phi(z/|z|).
class LiftedMap {
public:
    explicit LiftedMap(Contactomorphism phi);

    Vec evaluate(const Vec& z) const;          // 0 at z = 0
    Mat jacobian(const Vec& z) const;          // rejected for |z| < 1e-8
    bool is_linear() const { return phi_.is_unitary(); }
    LinearSymplectomorphism linear() const;    // Unitary kinds only
    const Contactomorphism& source() const { return phi_; }

private:
    Contactomorphism phi_;
};

inline LiftedMap lift_map(Contactomorphism phi) { return LiftedMap(std::move(phi)); }

// (z, t) -> |z|^2 H_t(z/|z|), homogeneous of degree 2.
std::function<double(const Vec&, double)> lift_hamiltonian(const HamSpec& H);

// Simple generating form of a linear symplectomorphism with Id + Phi
// invertible: S = J (Id - Phi)(Id + Phi)^{-1}, the unique symmetric matrix
// with graph(d x^T S x) = tau(graph Phi). Throws NearIdentityMinusOne.
QuadForm cayley_genfun(const LinearSymplectomorphism& Phi, double tol_sing = 1e-10);

} // namespace gf
