#pragma once

#include "gf/linalg.hpp"

namespace gf {

// Quadratic form Q(x) = x^T S x with S symmetric; gradient 2 S x. The no-1/2
// convention makes d_z(-tan(pi t)|z|^2) = -2 tan(pi t) z, and restriction to
// the unit sphere has the eigenvectors of S as critical points with the
// eigenvalues as critical values.
class QuadForm {
public:
    explicit QuadForm(Mat S, double tol_sym = 1e-12);
    static QuadForm zero(int dim) { return QuadForm(Mat::Zero(dim, dim)); }

    const Mat& matrix() const { return S_; }
    int dim() const { return static_cast<int>(S_.rows()); }
    double value(const Vec& x) const { return x.dot(S_ * x); }
    Vec gradient(const Vec& x) const { return 2.0 * (S_ * x); }

private:
    Mat S_;
};

struct Inertia {
    int index;    // negative eigenvalues
    int nullity;  // |lambda| below tol_eig * spectral radius
    int positive;
};

// Eigenvalue counts with the null threshold relative to the spectral radius.
Inertia index_nullity(const Mat& S, double tol_eig = 1e-9);
inline Inertia index_nullity(const QuadForm& Q, double tol_eig = 1e-9) {
    return index_nullity(Q.matrix(), tol_eig);
}

} // namespace gf
