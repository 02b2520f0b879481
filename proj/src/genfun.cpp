#include "gf/genfun.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

#include "gf/errors.hpp"
#include "gf/symplectization.hpp"

namespace gf {

namespace {

struct ComposedSplit {
    // coordinate slices of (q; z1, z2, nu1, nu2)
    int b;   // base dim 2n
    int k1, k2;
    Vec q, z1, z2, nu1, nu2;
};

ComposedSplit split(const GenFun& F, const Vec& x) {
    ComposedSplit s;
    s.b = F.base_dim();
    s.k1 = F.left().fiber_dim();
    s.k2 = F.right().fiber_dim();
    s.q = x.segment(0, s.b);
    s.z1 = x.segment(s.b, s.b);
    s.z2 = x.segment(2 * s.b, s.b);
    s.nu1 = x.segment(3 * s.b, s.k1);
    s.nu2 = x.segment(3 * s.b + s.k1, s.k2);
    return s;
}

Vec join2(const Vec& a, const Vec& b) {
    Vec out(a.size() + b.size());
    out << a, b;
    return out;
}

} // namespace

GenFun GenFun::quadratic(int base_dim, QuadForm Q) {
    if (Q.dim() < base_dim) throw DimensionMismatch("quadratic body smaller than base dimension");
    GenFun f;
    f.kind_ = Kind::Quadratic;
    f.base_dim_ = base_dim;
    f.fiber_dim_ = Q.dim() - base_dim;
    f.quad_ = std::make_shared<const QuadForm>(std::move(Q));
    return f;
}

GenFun GenFun::numeric(int base_dim, int fiber_dim, ValueFn value, GradFn grad, HessFn hess) {
    GenFun f;
    f.kind_ = Kind::Numeric;
    f.base_dim_ = base_dim;
    f.fiber_dim_ = fiber_dim;
    f.value_ = std::move(value);
    f.grad_ = std::move(grad);
    f.hess_ = std::move(hess);
    return f;
}

const QuadForm& GenFun::quad() const {
    if (kind_ != Kind::Quadratic) throw Error("not a quadratic body");
    return *quad_;
}

const GenFun& GenFun::left() const {
    if (kind_ != Kind::Composed) throw Error("not a composed body");
    return *left_;
}

const GenFun& GenFun::right() const {
    if (kind_ != Kind::Composed) throw Error("not a composed body");
    return *right_;
}

double GenFun::value(const Vec& x) const {
    switch (kind_) {
        case Kind::Quadratic:
            return quad_->value(x);
        case Kind::Numeric:
            return value_(x);
        case Kind::Composed: {
            ComposedSplit s = split(*this, x);
            double v1 = left_->value(join2(s.z1, s.nu1));
            double v2 = right_->value(join2(s.z2, s.nu2));
            return v1 + v2 - 2.0 * omega(s.z1 - s.q, s.z2 - s.q);
        }
    }
    throw Error("unreachable");
}

Vec GenFun::gradient(const Vec& x) const {
    switch (kind_) {
        case Kind::Quadratic:
            return quad_->gradient(x);
        case Kind::Numeric:
            return grad_(x);
        case Kind::Composed: {
            ComposedSplit s = split(*this, x);
            Vec g1 = left_->gradient(join2(s.z1, s.nu1));
            Vec g2 = right_->gradient(join2(s.z2, s.nu2));
            Vec out(dim());
            out.segment(0, s.b) = 2.0 * apply_J(s.z1 - s.z2);
            out.segment(s.b, s.b) = g1.head(s.b) + 2.0 * apply_J(s.z2 - s.q);
            out.segment(2 * s.b, s.b) = g2.head(s.b) - 2.0 * apply_J(s.z1 - s.q);
            out.segment(3 * s.b, s.k1) = g1.tail(s.k1);
            out.segment(3 * s.b + s.k1, s.k2) = g2.tail(s.k2);
            return out;
        }
    }
    throw Error("unreachable");
}

Mat GenFun::hessian(const Vec& x) const {
    switch (kind_) {
        case Kind::Quadratic:
            return 2.0 * quad_->matrix();
        case Kind::Numeric: {
            if (hess_) return hess_(x);
            const int d = dim();
            const double h = 1e-6 * std::max(1.0, x.norm());
            Mat out(d, d);
            for (int i = 0; i < d; ++i) {
                Vec e = Vec::Zero(d);
                e[i] = h;
                out.col(i) = (grad_(x + e) - grad_(x - e)) / (2.0 * h);
            }
            return 0.5 * (out + out.transpose());
        }
        case Kind::Composed: {
            ComposedSplit s = split(*this, x);
            const int d = dim(), b = s.b;
            Mat out = Mat::Zero(d, d);
            Mat H1 = left_->hessian(join2(s.z1, s.nu1));
            Mat H2 = right_->hessian(join2(s.z2, s.nu2));
            // embed H1 on (z1, nu1)
            out.block(b, b, b, b) += H1.topLeftCorner(b, b);
            out.block(b, 3 * b, b, s.k1) += H1.topRightCorner(b, s.k1);
            out.block(3 * b, b, s.k1, b) += H1.bottomLeftCorner(s.k1, b);
            out.block(3 * b, 3 * b, s.k1, s.k1) += H1.bottomRightCorner(s.k1, s.k1);
            // embed H2 on (z2, nu2)
            out.block(2 * b, 2 * b, b, b) += H2.topLeftCorner(b, b);
            out.block(2 * b, 3 * b + s.k1, b, s.k2) += H2.topRightCorner(b, s.k2);
            out.block(3 * b + s.k1, 2 * b, s.k2, b) += H2.bottomLeftCorner(s.k2, b);
            out.block(3 * b + s.k1, 3 * b + s.k1, s.k2, s.k2) += H2.bottomRightCorner(s.k2, s.k2);
            // coupling -2 omega(z1-q, z2-q); Hessian = 2 x coefficient blocks
            const Mat J = J_matrix(b);
            out.block(0, b, b, b) += 2.0 * J;        // q, z1
            out.block(b, 0, b, b) += -2.0 * J;
            out.block(0, 2 * b, b, b) += -2.0 * J;   // q, z2
            out.block(2 * b, 0, b, b) += 2.0 * J;
            out.block(b, 2 * b, b, b) += 2.0 * J;    // z1, z2
            out.block(2 * b, b, b, b) += -2.0 * J;
            return out;
        }
    }
    throw Error("unreachable");
}

GenFun compose(const GenFun& F1, const GenFun& F2) {
    if (F1.base_dim() != F2.base_dim())
        throw DimensionMismatch("composition needs equal base dimensions");
    const int b = F1.base_dim();
    const int k1 = F1.fiber_dim(), k2 = F2.fiber_dim();

    if (F1.is_quadratic() && F2.is_quadratic()) {
        const int d = 3 * b + k1 + k2;
        Mat S = Mat::Zero(d, d);
        const Mat& S1 = F1.quad().matrix();
        const Mat& S2 = F2.quad().matrix();
        S.block(b, b, b, b) = S1.topLeftCorner(b, b);
        S.block(b, 3 * b, b, k1) = S1.topRightCorner(b, k1);
        S.block(3 * b, b, k1, b) = S1.bottomLeftCorner(k1, b);
        S.block(3 * b, 3 * b, k1, k1) = S1.bottomRightCorner(k1, k1);
        S.block(2 * b, 2 * b, b, b) = S2.topLeftCorner(b, b);
        S.block(2 * b, 3 * b + k1, b, k2) = S2.topRightCorner(b, k2);
        S.block(3 * b + k1, 2 * b, k2, b) = S2.bottomLeftCorner(k2, b);
        S.block(3 * b + k1, 3 * b + k1, k2, k2) = S2.bottomRightCorner(k2, k2);
        const Mat J = J_matrix(b);
        S.block(0, b, b, b) += J;
        S.block(b, 0, b, b) += -J;
        S.block(0, 2 * b, b, b) += -J;
        S.block(2 * b, 0, b, b) += J;
        S.block(b, 2 * b, b, b) += J;
        S.block(2 * b, b, b, b) += -J;
        return GenFun::quadratic(b, QuadForm(S));
    }

    GenFun f;
    f.kind_ = GenFun::Kind::Composed;
    f.base_dim_ = b;
    f.fiber_dim_ = 2 * b + k1 + k2;
    f.left_ = std::make_shared<const GenFun>(F1);
    f.right_ = std::make_shared<const GenFun>(F2);
    return f;
}

Vec fiber_critical_residual(const GenFun& F, const Vec& x) {
    return F.gradient(x).tail(F.fiber_dim());
}

bool is_fiber_critical(const GenFun& F, const Vec& x, double tol) {
    if (F.fiber_dim() == 0) return true;
    return fiber_critical_residual(F, x).norm() <= tol * std::max(1.0, x.norm());
}

std::pair<Vec, Vec> i_F(const GenFun& F, const Vec& x, double tol) {
    if (!is_fiber_critical(F, x, tol))
        throw NotFiberCritical("point is not on the fiber-critical set");
    Vec g = F.gradient(x);
    return {x.head(F.base_dim()), g.head(F.base_dim())};
}

std::pair<Vec, Vec> generated_map_point(const GenFun& F, const Vec& x, double tol) {
    auto [zeta, dzeta] = i_F(F, x, tol);
    return tau_inv(zeta, dzeta);
}

GenFun reeb_family(int n, double t) {
    if (n < 1) throw Error("n must be >= 1");
    const int d = 2 * n;
    const double c = -std::tan(M_PI * t / 3.0);
    GenFun Q = GenFun::quadratic(d, QuadForm(c * Mat::Identity(d, d)));
    return compose(Q, compose(Q, Q));
}

Mat reeb_family_dt(int n, double t) {
    const int d = 2 * n;
    const double sec = 1.0 / std::cos(M_PI * t / 3.0);
    const double dc = -(M_PI / 3.0) * sec * sec;
    Mat out = Mat::Zero(10 * n, 10 * n);
    out.block(d, d, d, d) = dc * Mat::Identity(d, d);          // zeta_1
    out.block(3 * d, 3 * d, d, d) = dc * Mat::Identity(d, d);  // zeta_a
    out.block(4 * d, 4 * d, d, d) = dc * Mat::Identity(d, d);  // zeta_b
    return out;
}

std::vector<Vec> sigma_samples(const GenFun& F, int count, std::uint64_t seed) {
    if (!F.is_quadratic()) throw Error("Sigma sampling implemented for quadratic bodies");
    const int m = F.dim(), k = F.fiber_dim();
    if (k == 0) return sphere_samples(m, count, seed);
    Mat R = F.quad().matrix().bottomRows(k);  // dF/dnu = 2 R x
    Eigen::FullPivLU<Mat> lu(R);
    lu.setThreshold(1e-10);
    Mat K = lu.kernel();
    if (K.cols() == 0) return {};
    Eigen::HouseholderQR<Mat> qr(K);
    Mat Kb = qr.householderQ() * Mat::Identity(m, K.cols());
    std::vector<Vec> out;
    auto coeffs = sphere_samples(static_cast<int>(K.cols()), count, seed + 11);
    out.reserve(count);
    for (const auto& c : coeffs) {
        Vec v = Kb * c;
        out.push_back(v / v.norm());
    }
    return out;
}

DtNegativityReport dt_negativity_check(int n, double t, int samples, std::uint64_t seed) {
    GenFun A = reeb_family(n, t);
    Mat Mdt = reeb_family_dt(n, t);
    DtNegativityReport rep;
    rep.samples = samples;
    rep.max_value = -std::numeric_limits<double>::infinity();
    rep.all_negative = true;
    for (const Vec& x : sigma_samples(A, samples, seed)) {
        const double v = x.dot(Mdt * x);
        if (v > rep.max_value) {
            rep.max_value = v;
            rep.worst_witness = x;
        }
        if (!(v < 0)) rep.all_negative = false;
    }
    // Sigma equations plus zeta_1 = zeta_a = zeta_b = 0 must force the origin.
    const int d = 2 * n, m = 10 * n;
    Mat sys(8 * n + 6 * n, m);
    sys.topRows(8 * n) = A.quad().matrix().bottomRows(8 * n);
    Mat zero_rows = Mat::Zero(6 * n, m);
    zero_rows.block(0, d, d, d) = Mat::Identity(d, d);
    zero_rows.block(d, 3 * d, d, d) = Mat::Identity(d, d);
    zero_rows.block(2 * d, 4 * d, d, d) = Mat::Identity(d, d);
    sys.bottomRows(6 * n) = zero_rows;
    Eigen::FullPivLU<Mat> lu(sys);
    lu.setThreshold(1e-10);
    rep.zero_forcing = lu.rank() == m;
    return rep;
}

namespace {

struct LiftEval {
    Vec endpoint;  // \tilde S phi(z), scaled
    Mat jacobian;  // 0-homogeneous
    double action; // action integral along the trajectory from z, degree 2
};

// Integrates the lifted flow of H over [t0, t1] from z (not necessarily
// unit), jointly with the variational equations and the action
// S = int p dq + (1/2) \hat H dt pulled back to the w = (z + Z)/2 chart.
LiftEval lift_with_action(const HamSpec& H, double t0, double t1, const Vec& z,
                          const OdeConfig& cfg) {
    const int d = static_cast<int>(z.size());
    const double r = z.norm();
    const Vec zh = z / r;

    Vec y0(d + d * d + 1);
    y0.head(d) = zh;
    Eigen::Map<Mat>(y0.data() + d, d, d) = Mat::Identity(d, d);
    y0[d + d * d] = 0.0;

    auto rhs = [&](double u, const Vec& y) {
        Vec out(y.size());
        const Vec zu = y.head(d);
        const Vec grad = H.lifted_gradient(zu, u);
        const Vec dz = 0.5 * apply_J(grad);
        out.head(d) = dz;
        // variational part
        Mat A;
        if (H.is_quadratic()) {
            A = 2.0 * H.matrix();
        } else {
            const double h = 1e-6 * std::max(1.0, zu.norm());
            A.resize(d, d);
            for (int i = 0; i < d; ++i) {
                Vec e = Vec::Zero(d);
                e[i] = h;
                A.col(i) = (H.lifted_gradient(zu + e, u) - H.lifted_gradient(zu - e, u)) / (2.0 * h);
            }
            A = 0.5 * (A + A.transpose()).eval();
        }
        Mat dY = 0.5 * A * Eigen::Map<const Mat>(y.data() + d, d, d);
        Mat JY(d, d);
        JY.topRows(d / 2) = -dY.bottomRows(d / 2);
        JY.bottomRows(d / 2) = dY.topRows(d / 2);
        Eigen::Map<Mat>(out.data() + d, d, d) = JY;
        // action: <J(z0 - z(u)), z'(u)>/2 + \hat H_u(z(u))/2
        out[d + d * d] = 0.5 * apply_J(zh - zu).dot(dz) + 0.5 * H.lifted_value(zu, u);
        return out;
    };
    Vec y = integrate(rhs, t0, t1, y0, cfg);
    LiftEval ev;
    ev.endpoint = r * y.head(d);
    ev.jacobian = Eigen::Map<const Mat>(y.data() + d, d, d);
    ev.action = r * r * y[d + d * d];
    return ev;
}

// Solves (z + \tilde S phi(z))/2 = w by Newton; returns the solved LiftEval at z
// plus z itself.
std::pair<Vec, LiftEval> graph_projection_solve(const HamSpec& H, double t0, double t1,
                                                const Vec& w, const ActionConfig& cfg) {
    Vec z = w;
    for (int it = 0; it < cfg.newton_max_iter; ++it) {
        LiftEval ev = lift_with_action(H, t0, t1, z, cfg.ode);
        Vec res = 0.5 * (z + ev.endpoint) - w;
        if (res.norm() <= cfg.newton_tol * std::max(1.0, w.norm())) return {z, ev};
        Mat Dres = 0.5 * (Mat::Identity(z.size(), z.size()) + ev.jacobian);
        Vec step = Dres.fullPivLu().solve(res);
        if (!step.allFinite()) throw NewtonDivergence("singular projection Jacobian");
        z -= step;
        if (z.norm() < 1e-14 * std::max(1.0, w.norm()))
            throw NewtonDivergence("Newton iterate collapsed to the origin");
    }
    throw NewtonDivergence("graph projection Newton did not converge");
}

} // namespace

GenFun action_genfun(const HamSpec& H, const ActionConfig& cfg, double t0, double t1) {
    const int d = 2 * H.n();

    // C^2-smallness: the graph must project bijectively to the diagonal.
    for (const Vec& zh : sphere_samples(d, cfg.sample_grid, 3)) {
        LiftEval ev = lift_with_action(H, t0, t1, zh, cfg.ode);
        Mat D = 0.5 * (Mat::Identity(d, d) + ev.jacobian);
        const double det = D.determinant();
        if (!(det > cfg.det_margin))
            throw ProjectionNotBijective(
                "graph of the lifted flow does not project bijectively (det = " +
                std::to_string(det) + "); subdivide the isotopy");
    }

    HamSpec Hc = H;
    ActionConfig cc = cfg;
    auto value = [Hc, cc, t0, t1, d](const Vec& w) -> double {
        if (w.norm() < 1e-300) return 0.0;
        auto [z, ev] = graph_projection_solve(Hc, t0, t1, w, cc);
        (void)z;
        return ev.action;
    };
    auto grad = [Hc, cc, t0, t1, d](const Vec& w) -> Vec {
        if (w.norm() < 1e-300) return Vec::Zero(d);
        auto [z, ev] = graph_projection_solve(Hc, t0, t1, w, cc);
        return apply_J(z - ev.endpoint);
    };
    auto hess = [Hc, cc, t0, t1, d](const Vec& w) -> Mat {
        Vec wq = w;
        if (wq.norm() < 1e-300) wq = Vec::Unit(d, 0);
        auto [z, ev] = graph_projection_solve(Hc, t0, t1, wq, cc);
        (void)z;
        const Mat I = Mat::Identity(d, d);
        Mat dz_dw = 2.0 * (I + ev.jacobian).fullPivLu().inverse();
        Mat dp = (I - ev.jacobian) * dz_dw;
        Mat Jdp(d, d);
        Jdp.topRows(d / 2) = -dp.bottomRows(d / 2);
        Jdp.bottomRows(d / 2) = dp.topRows(d / 2);
        return 0.5 * (Jdp + Jdp.transpose());
    };
    return GenFun::numeric(d, 0, value, grad, hess);
}

GenFun genfun_for_isotopy(const HamSpec& H, int N, const ActionConfig& cfg) {
    if (N < 1) throw Error("N must be >= 1");
    std::optional<GenFun> G;
    for (int j = 0; j < N; ++j) {
        const double t0 = static_cast<double>(j) / N;
        const double t1 = static_cast<double>(j + 1) / N;
        GenFun piece = action_genfun(H, cfg, t0, t1);
        G = G ? compose(*G, piece) : piece;
    }
    return *G;
}

std::pair<Mat, QuadForm> fiber_reduce_identity_form(const GenFun& F, double residual_bound) {
    if (!F.is_quadratic()) throw Error("fiber reduction needs a quadratic body");
    const int b = F.base_dim(), k = F.fiber_dim(), m = F.dim();

    for (const Vec& x : sigma_samples(F, 8, 5)) {
        auto [z, Z] = generated_map_point(F, x, 1e-7);
        if ((Z - z).norm() > 1e-6 * std::max(1.0, z.norm()))
            throw NotIdentityGenerator("quadratic form does not generate the identity");
    }

    const Mat& S = F.quad().matrix();
    const Mat A = S.topLeftCorner(b, b);
    const Mat B = S.topRightCorner(b, k);
    const Mat C = S.bottomRightCorner(k, k);

    Mat D = Eigen::CompleteOrthogonalDecomposition<Mat>(C).solve(-B.transpose());
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    if ((C * D + B.transpose()).cwiseAbs().maxCoeff() > residual_bound * scale)
        throw InconsistentSystem("C D + B^T residual above bound");
    if ((A + B * D).cwiseAbs().maxCoeff() > residual_bound * scale)
        throw InconsistentSystem("A + B D residual above bound");

    Mat Psi = Mat::Identity(m, m);
    Psi.bottomLeftCorner(k, b) = D;
    Mat Sp = Psi.transpose() * S * Psi;
    if (Sp.topLeftCorner(b, b).cwiseAbs().maxCoeff() > 10 * residual_bound * scale ||
        Sp.topRightCorner(b, k).cwiseAbs().maxCoeff() > 10 * residual_bound * scale)
        throw InconsistentSystem("reduced form retains base coupling");
    Sp.topLeftCorner(b, b).setZero();
    Sp.topRightCorner(b, k).setZero();
    Sp.bottomLeftCorner(k, b).setZero();
    return {D, QuadForm(Sp)};
}

} // namespace gf
