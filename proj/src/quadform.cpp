#include "gf/quadform.hpp"

#include <Eigen/Eigenvalues>

#include "gf/errors.hpp"

namespace gf {

QuadForm::QuadForm(Mat S, double tol_sym) : S_(std::move(S)) {
    if (S_.rows() != S_.cols()) throw DimensionMismatch("quadratic form matrix must be square");
    if ((S_ - S_.transpose()).cwiseAbs().maxCoeff() > tol_sym)
        throw Error("quadratic form matrix must be symmetric");
    S_ = 0.5 * (S_ + S_.transpose());
}

Inertia index_nullity(const Mat& S, double tol_eig) {
    Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
    const Vec ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    const double cut = scale > 0 ? tol_eig * scale : tol_eig;
    Inertia r{0, 0, 0};
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev[i]) <= cut)
            ++r.nullity;
        else if (ev[i] < 0)
            ++r.index;
        else
            ++r.positive;
    }
    return r;
}

} // namespace gf
