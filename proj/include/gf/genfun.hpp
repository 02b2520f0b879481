#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "gf/contact.hpp"
#include "gf/quadform.hpp"

namespace gf {

// Homogeneous-degree-2 function \hat F on R^{2n+k}, the extension of a
// generating function F on S^{2n+k-1}. Fiber variables are the last k.
class GenFun {
public:
    enum class Kind { Quadratic, Numeric, Composed };

    using ValueFn = std::function<double(const Vec&)>;
    using GradFn = std::function<Vec(const Vec&)>;
    using HessFn = std::function<Mat(const Vec&)>;

    static GenFun quadratic(int base_dim, QuadForm Q);
    static GenFun numeric(int base_dim, int fiber_dim, ValueFn value, GradFn grad,
                          HessFn hess = nullptr);

    Kind kind() const { return kind_; }
    bool is_quadratic() const { return kind_ == Kind::Quadratic; }
    int base_dim() const { return base_dim_; }
    int fiber_dim() const { return fiber_dim_; }
    int dim() const { return base_dim_ + fiber_dim_; }

    const QuadForm& quad() const;
    const GenFun& left() const;   // Composed only
    const GenFun& right() const;

    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    Mat hessian(const Vec& x) const;  // finite differences for Numeric bodies without one

    friend GenFun compose(const GenFun& F1, const GenFun& F2);

private:
    GenFun() = default;
    Kind kind_ = Kind::Quadratic;
    int base_dim_ = 0;
    int fiber_dim_ = 0;
    std::shared_ptr<const QuadForm> quad_;
    ValueFn value_;
    GradFn grad_;
    HessFn hess_;
    std::shared_ptr<const GenFun> left_, right_;
};

// dF/dnu at (zeta, nu); empty for simple (k = 0) functions.
Vec fiber_critical_residual(const GenFun& F, const Vec& x);
bool is_fiber_critical(const GenFun& F, const Vec& x, double tol = 1e-8);

// i_F(zeta, nu) = (zeta, dF/dzeta); requires fiber-criticality.
std::pair<Vec, Vec> i_F(const GenFun& F, const Vec& x, double tol = 1e-8);

// tau^{-1} of i_F: the generated graph point (z, Z) with Z = \tilde S phi(z).
std::pair<Vec, Vec> generated_map_point(const GenFun& F, const Vec& x, double tol = 1e-8);

// F1 # F2 (q; z1, z2, nu1, nu2) = F1(z1,nu1) + F2(z2,nu2) - 2 omega(z1-q, z2-q),
// generating phi_2 compose phi_1. Exact block matrix for quadratic bodies.
GenFun compose(const GenFun& F1, const GenFun& F2);

// \hat A_t = Q_{t/3} # (Q_{t/3} # Q_{t/3}) with Q_s = -tan(pi s)|z|^2 on R^{2n};
// generates the negative Reeb flow a_t(z) = e^{-2 pi i t} z. Total dim 10n,
// fiber dim 8n.
GenFun reeb_family(int n, double t);
Mat reeb_family_dt(int n, double t);  // analytic d/dt of the coefficient matrix

// Unit-norm samples of the fiber-critical subspace of a quadratic body.
std::vector<Vec> sigma_samples(const GenFun& F, int count, std::uint64_t seed = 0);

struct DtNegativityReport {
    bool all_negative;
    double max_value;      // max of d/dt \hat A_t over the unit Sigma samples
    Vec worst_witness;
    int samples;
    bool zero_forcing;     // Sigma + {zeta_1 = zeta_a = zeta_b = 0} forces the origin
};
DtNegativityReport dt_negativity_check(int n, double t, int samples, std::uint64_t seed = 0);

struct ActionConfig {
    OdeConfig ode;
    int sample_grid = 24;       // C^2-smallness determinant checks
    int newton_max_iter = 60;
    double newton_tol = 1e-12;
    double det_margin = 1e-10;
};

// Simple generating function of the lifted flow of H over [t0, t1], computed
// from the action integral along lifted trajectories; the gradient is the
// graph covector and is exact up to flow tolerance.
GenFun action_genfun(const HamSpec& H, const ActionConfig& cfg = {}, double t0 = 0.0,
                     double t1 = 1.0);

// Subdivide [0,1] into N pieces, build an action generating function per
// incremental flow and fold with the composition formula; fiber dimension
// grows by 4n per composition.
GenFun genfun_for_isotopy(const HamSpec& H, int N, const ActionConfig& cfg = {});

// For a quadratic form generating the identity, solve C D + B^T = 0 and
// A + B D = 0; returns D and Q' = Q o Psi_1 with vanishing base-base and
// base-fiber blocks. index(Q') = index(Q).
std::pair<Mat, QuadForm> fiber_reduce_identity_form(const GenFun& F, double residual_bound = 1e-9);

} // namespace gf
