#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "gf/hamlang.hpp"
#include "gf/linalg.hpp"
#include "gf/ode.hpp"

namespace gf {

// Unit vector in R^{2n}, coordinates (x_1..x_n, y_1..y_n), z_j = x_j + i y_j.
class SpherePoint {
public:
    explicit SpherePoint(Vec coords, double tol_unit = 1e-12);
    const Vec& coords() const { return coords_; }
    int dim() const { return static_cast<int>(coords_.size()); }
    int n() const { return dim() / 2; }

private:
    Vec coords_;
};

// Time-dependent Hamiltonian on the sphere: either H(p) = p^T S p for a
// symmetric ambient matrix, or a parsed expression in x_j, y_j, t.
class HamSpec {
public:
    static HamSpec quadratic(Mat S);
    static HamSpec expression(const std::string& src, int n);

    int n() const { return n_; }
    bool is_quadratic() const { return std::holds_alternative<Mat>(body_); }
    const Mat& matrix() const { return std::get<Mat>(body_); }
    const hamlang::AstPtr& ast() const { return std::get<hamlang::AstPtr>(body_); }
    const std::string& source() const { return source_; }

    // Value on the sphere (|p| = 1).
    double value(const Vec& p, double t) const;
    // Lifted Hamiltonian |z|^2 H_t(z/|z|) and its ambient gradient, z != 0.
    double lifted_value(const Vec& z, double t) const;
    Vec lifted_gradient(const Vec& z, double t) const;

private:
    HamSpec() = default;
    int n_ = 0;
    std::string source_;
    std::variant<Mat, hamlang::AstPtr> body_;
};

double contact_form(const SpherePoint& p, const Vec& v);
Vec reeb_vector(const SpherePoint& p);
SpherePoint reeb_flow(double t, const SpherePoint& p);

// Endpoint of the lifted flow trajectory through a unit start point, with the
// Jacobian of the lifted time-t map when requested.
struct LiftedFlowResult {
    Vec endpoint;                 // \tilde S phi_t(p), generally not unit
    std::optional<Mat> jacobian;  // D \tilde S phi_t at p
};
LiftedFlowResult lifted_flow(const HamSpec& H, double t, const Vec& start, bool want_jacobian,
                             const OdeConfig& cfg = {});

// (phi_t(p), g_t(p)) for the contact isotopy generated by H via alpha(X_t) = H_t.
std::pair<SpherePoint, double> contact_flow(const HamSpec& H, double t, const SpherePoint& p,
                                            const OdeConfig& cfg = {});

class Contactomorphism {
public:
    // Orthogonal matrix commuting with J; strict contactomorphism, g = 0.
    static Contactomorphism unitary(Mat U, double tol = 1e-10);
    static Contactomorphism flow(HamSpec H, double time, OdeConfig cfg = {});
    static Contactomorphism identity(int n);

    bool is_unitary() const { return kind_ == Kind::Unitary; }
    const Mat& matrix() const { return U_; }
    const HamSpec& hamiltonian() const { return *H_; }
    double time() const { return time_; }
    const OdeConfig& ode_config() const { return cfg_; }
    int n() const { return n_; }

    SpherePoint apply(const SpherePoint& p) const;
    double conformal_factor(const SpherePoint& p) const;           // g(p)
    std::pair<SpherePoint, double> apply_with_factor(const SpherePoint& p) const;

    // Differential data at p: d(phi) on T_p S^{2n-1} (ambient 2n x 2n
    // representation of the sphere map composed with the lift structure)
    // and dg as an ambient covector. Throws JacobianUnavailable on failure.
    struct Differential {
        Vec phi_p;
        double g;
        Mat dphi;  // ambient derivative of the sphere map p -> phi(p)
        Vec dg;    // ambient gradient of p -> g(p)
    };
    Differential differential(const SpherePoint& p) const;

private:
    enum class Kind { Unitary, Flow };
    Kind kind_ = Kind::Unitary;
    int n_ = 0;
    Mat U_;
    std::shared_ptr<const HamSpec> H_;
    double time_ = 0.0;
    OdeConfig cfg_;
};

enum class DiscriminantVerdict { No, Degenerate, Nondegenerate };

struct DiscriminantReport {
    DiscriminantVerdict verdict;
    double fixed_residual;    // |phi(p) - p|
    double conformal_residual;  // |g(p)|
    double sigma_min;         // smallest singular value of X -> (dphi X - X, dg X)
};

DiscriminantReport is_discriminant(const Contactomorphism& phi, const SpherePoint& p,
                                   double tol = 1e-8, double tol_rank = 1e-6);

// All s in [0, 2pi) with reeb_flow(s, phi(p)) = p and g(p) = 0.
std::vector<double> translated_point_check(const Contactomorphism& phi, const SpherePoint& p,
                                           double tol = 1e-8);

struct RpLiftReport {
    bool equivariant;
    double max_violation;
    int samples;
};

// Antipodal equivariance phi(-p) = -phi(p) on a deterministic sample grid;
// a lift of an RP^{2n-1} contactomorphism must be odd.
RpLiftReport rp_lift_report(const std::function<Vec(const Vec&)>& map, int n, int samples = 64,
                            double tol = 1e-6);
RpLiftReport rp_lift_report(const Contactomorphism& phi, int samples = 64, double tol = 1e-6);
// Same, but throws NotEquivariant on violation.
RpLiftReport rp_lift_check(const Contactomorphism& phi, int samples = 64, double tol = 1e-6);

} // namespace gf
