#include "gf/contact.hpp"

#include <cmath>

#include "gf/errors.hpp"

namespace gf {

SpherePoint::SpherePoint(Vec coords, double tol_unit) : coords_(std::move(coords)) {
    if (coords_.size() < 2 || coords_.size() % 2 != 0)
        throw Error("sphere point needs even dimension >= 2");
    const double norm = coords_.norm();
    if (norm < tol_unit) throw Error("cannot normalize the zero vector to a sphere point");
    coords_ /= norm;
}

HamSpec HamSpec::quadratic(Mat S) {
    if (S.rows() != S.cols() || S.rows() % 2 != 0) throw Error("quadratic Hamiltonian needs a 2n x 2n matrix");
    if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw Error("quadratic Hamiltonian matrix must be symmetric");
    HamSpec h;
    h.n_ = static_cast<int>(S.rows()) / 2;
    h.body_ = std::move(S);
    return h;
}

HamSpec HamSpec::expression(const std::string& src, int n) {
    HamSpec h;
    h.n_ = n;
    h.source_ = src;
    h.body_ = hamlang::parse(src, n);
    return h;
}

double HamSpec::value(const Vec& p, double t) const {
    double v;
    if (is_quadratic())
        v = p.dot(matrix() * p);
    else
        v = hamlang::eval(ast(), n_, p, t);
    if (!std::isfinite(v)) throw NonFiniteHamiltonian("Hamiltonian is not finite at sample point");
    return v;
}

double HamSpec::lifted_value(const Vec& z, double t) const {
    if (is_quadratic()) return z.dot(matrix() * z);  // already homogeneous of degree 2
    const double r2 = z.squaredNorm();
    if (r2 == 0.0) return 0.0;
    return r2 * value(z / std::sqrt(r2), t);
}

Vec HamSpec::lifted_gradient(const Vec& z, double t) const {
    if (is_quadratic()) return 2.0 * (matrix() * z);
    const double r = z.norm();
    if (r == 0.0) return Vec::Zero(z.size());
    const Vec u = z / r;
    auto res = hamlang::eval_with_gradient(ast(), n_, u, t);
    if (!std::isfinite(res.value) || !res.gradient.allFinite())
        throw NonFiniteHamiltonian("Hamiltonian gradient is not finite");
    // grad(|z|^2 H(z/|z|)) = 2 r H(u) u + r (I - u u^T) grad H(u)
    return 2.0 * r * res.value * u + r * (res.gradient - u.dot(res.gradient) * u);
}

double contact_form(const SpherePoint& p, const Vec& v) { return apply_J(p.coords()).dot(v); }

Vec reeb_vector(const SpherePoint& p) { return apply_J(p.coords()); }

SpherePoint reeb_flow(double t, const SpherePoint& p) {
    return SpherePoint(rotate_J(t, p.coords()));
}

namespace {

// Ambient generator of the lifted flow: z' = (1/2) J grad \hat H_t(z).
// With alpha = (x dy - y dx)|_S and d lambda = 2 omega_std, this is the
// field whose sphere restriction satisfies alpha(X_t) = H_t; in particular
// H = 1 integrates to the Reeb rotation z -> e^{it} z.
Vec flow_rhs(const HamSpec& H, double t, const Vec& z) {
    return 0.5 * apply_J(H.lifted_gradient(z, t));
}

// Hessian of the lifted Hamiltonian: exact for quadratic bodies, central
// differences over the exact gradient otherwise.
Mat lifted_hessian(const HamSpec& H, double t, const Vec& z) {
    if (H.is_quadratic()) return 2.0 * H.matrix();
    const int d = static_cast<int>(z.size());
    const double h = 1e-6 * std::max(1.0, z.norm());
    Mat out(d, d);
    for (int i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e[i] = h;
        out.col(i) = (H.lifted_gradient(z + e, t) - H.lifted_gradient(z - e, t)) / (2.0 * h);
    }
    return 0.5 * (out + out.transpose());
}

} // namespace

LiftedFlowResult lifted_flow(const HamSpec& H, double t, const Vec& start, bool want_jacobian,
                             const OdeConfig& cfg) {
    const int d = static_cast<int>(start.size());
    if (!want_jacobian) {
        Vec y = integrate([&](double s, const Vec& z) { return flow_rhs(H, s, z); }, 0.0, t,
                          start, cfg);
        return {y, std::nullopt};
    }
    // joint state [z; vec(Y)], Y' = (1/2) J Hess(\hat H) Y
    Vec y0(d + d * d);
    y0.head(d) = start;
    Eigen::Map<Mat>(y0.data() + d, d, d) = Mat::Identity(d, d);
    auto rhs = [&](double s, const Vec& y) {
        Vec out(y.size());
        const Vec z = y.head(d);
        out.head(d) = flow_rhs(H, s, z);
        Mat A = lifted_hessian(H, s, z);
        Eigen::Map<const Mat> Y(y.data() + d, d, d);
        Mat dY = 0.5 * A * Y;
        // apply J row-blockwise: J M has rows (-bottom; top)
        Mat JY(d, d);
        JY.topRows(d / 2) = -dY.bottomRows(d / 2);
        JY.bottomRows(d / 2) = dY.topRows(d / 2);
        Eigen::Map<Mat>(out.data() + d, d, d) = JY;
        return out;
    };
    Vec y = integrate(rhs, 0.0, t, y0, cfg);
    Mat Y = Eigen::Map<const Mat>(y.data() + d, d, d);
    if (!Y.allFinite()) throw JacobianUnavailable("variational equations diverged");
    return {y.head(d), Y};
}

std::pair<SpherePoint, double> contact_flow(const HamSpec& H, double t, const SpherePoint& p,
                                            const OdeConfig& cfg) {
    LiftedFlowResult r = lifted_flow(H, t, p.coords(), false, cfg);
    const double radius = r.endpoint.norm();
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw IntegrationFailure("lifted trajectory collapsed or diverged");
    // lift structure: endpoint = e^{-g/2} phi_t(p), so g = -2 log |endpoint|
    return {SpherePoint(r.endpoint / radius), -2.0 * std::log(radius)};
}

Contactomorphism Contactomorphism::unitary(Mat U, double tol) {
    if (U.rows() != U.cols() || U.rows() % 2 != 0) throw Error("unitary kind needs a 2n x 2n matrix");
    const int d = static_cast<int>(U.rows());
    Mat J = J_matrix(d);
    if ((U.transpose() * U - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
        throw Error("matrix is not orthogonal");
    if ((U * J - J * U).cwiseAbs().maxCoeff() > tol) throw Error("matrix does not commute with J");
    Contactomorphism c;
    c.kind_ = Kind::Unitary;
    c.n_ = d / 2;
    c.U_ = std::move(U);
    return c;
}

Contactomorphism Contactomorphism::flow(HamSpec H, double time, OdeConfig cfg) {
    Contactomorphism c;
    c.kind_ = Kind::Flow;
    c.n_ = H.n();
    c.H_ = std::make_shared<const HamSpec>(std::move(H));
    c.time_ = time;
    c.cfg_ = cfg;
    return c;
}

Contactomorphism Contactomorphism::identity(int n) {
    return unitary(Mat::Identity(2 * n, 2 * n));
}

SpherePoint Contactomorphism::apply(const SpherePoint& p) const {
    return apply_with_factor(p).first;
}

double Contactomorphism::conformal_factor(const SpherePoint& p) const {
    return apply_with_factor(p).second;
}

std::pair<SpherePoint, double> Contactomorphism::apply_with_factor(const SpherePoint& p) const {
    if (kind_ == Kind::Unitary) return {SpherePoint(U_ * p.coords()), 0.0};
    return contact_flow(*H_, time_, p, cfg_);
}

Contactomorphism::Differential Contactomorphism::differential(const SpherePoint& p) const {
    Differential d;
    if (kind_ == Kind::Unitary) {
        d.phi_p = U_ * p.coords();
        d.g = 0.0;
        d.dphi = U_;
        d.dg = Vec::Zero(2 * n_);
        return d;
    }
    LiftedFlowResult r = lifted_flow(*H_, time_, p.coords(), true, cfg_);
    const Mat& Y = *r.jacobian;
    const double radius = r.endpoint.norm();
    if (!(radius > 0.0)) throw JacobianUnavailable("lifted trajectory collapsed");
    const Vec w = r.endpoint / radius;
    d.phi_p = w;
    d.g = -2.0 * std::log(radius);
    // phi(p) = W/|W| with W = lifted endpoint; g = -2 log |W|
    d.dphi = (Mat::Identity(2 * n_, 2 * n_) - w * w.transpose()) * Y / radius;
    d.dg = -2.0 * (Y.transpose() * w) / radius;
    return d;
}

DiscriminantReport is_discriminant(const Contactomorphism& phi, const SpherePoint& p, double tol,
                                   double tol_rank) {
    DiscriminantReport rep{};
    auto [phip, g] = phi.apply_with_factor(p);
    rep.fixed_residual = (phip.coords() - p.coords()).norm();
    rep.conformal_residual = std::abs(g);
    if (rep.fixed_residual > tol || rep.conformal_residual > tol) {
        rep.verdict = DiscriminantVerdict::No;
        rep.sigma_min = 0.0;
        return rep;
    }
    auto d = phi.differential(p);
    const Mat T = tangent_basis(p.coords());          // 2n x (2n-1)
    const int k = static_cast<int>(T.cols());
    Mat A(p.dim() + 1, k);                            // X -> (dphi X - X, dg X)
    A.topRows(p.dim()) = d.dphi * T - T;
    A.bottomRows(1) = d.dg.transpose() * T;
    Eigen::JacobiSVD<Mat> svd(A);
    rep.sigma_min = svd.singularValues()(k - 1);
    rep.verdict = rep.sigma_min > tol_rank ? DiscriminantVerdict::Nondegenerate
                                           : DiscriminantVerdict::Degenerate;
    return rep;
}

std::vector<double> translated_point_check(const Contactomorphism& phi, const SpherePoint& p,
                                           double tol) {
    auto [phip, g] = phi.apply_with_factor(p);
    if (std::abs(g) > tol) return {};
    const Vec& w = phip.coords();
    // reeb_flow(s, w) = p requires w = e^{-is} p; the Hermitian pairing
    // <p, w>_C equals e^{-is} exactly when w lies on the Reeb circle of p.
    auto [re, im] = complex_pairing(p.coords(), w);
    double s = std::atan2(-im, re);
    if (s < 0) s += 2.0 * M_PI;
    const Vec predicted = rotate_J(-s, p.coords());
    if ((w - predicted).norm() > tol) return {};
    if (s > 2.0 * M_PI - 1e-6) s = 0.0;  // cluster angles near the 2pi wrap
    return {s};
}

RpLiftReport rp_lift_report(const std::function<Vec(const Vec&)>& map, int n, int samples,
                            double tol) {
    RpLiftReport rep{true, 0.0, samples};
    auto pts = sphere_samples(2 * n, samples, 7);
    for (const auto& z : pts) {
        const Vec a = map(z);
        const Vec b = map(-z);
        rep.max_violation = std::max(rep.max_violation, (a + b).norm());
    }
    rep.equivariant = rep.max_violation <= tol;
    return rep;
}

RpLiftReport rp_lift_report(const Contactomorphism& phi, int samples, double tol) {
    return rp_lift_report([&](const Vec& z) { return phi.apply(SpherePoint(z)).coords(); },
                          phi.n(), samples, tol);
}

RpLiftReport rp_lift_check(const Contactomorphism& phi, int samples, double tol) {
    RpLiftReport rep = rp_lift_report(phi, samples, tol);
    if (!rep.equivariant) throw NotEquivariant(rep.max_violation);
    return rep;
}

} // namespace gf
