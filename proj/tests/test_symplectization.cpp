#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "gf/errors.hpp"
#include "gf/genfun.hpp"
#include "gf/symplectization.hpp"

using namespace gf;

namespace {

Mat diag_rotation2(double a1, double a2) {
    Mat U = Mat::Zero(4, 4);
    U(0, 0) = std::cos(a1);
    U(0, 2) = -std::sin(a1);
    U(2, 0) = std::sin(a1);
    U(2, 2) = std::cos(a1);
    U(1, 1) = std::cos(a2);
    U(1, 3) = -std::sin(a2);
    U(3, 1) = std::sin(a2);
    U(3, 3) = std::cos(a2);
    return U;
}

Mat random_symplectic(int two_n, std::mt19937_64& rng) {
    // exp(J S) for symmetric S is symplectic
    std::normal_distribution<double> g(0.0, 0.4);
    Mat A(two_n, two_n);
    for (int i = 0; i < two_n; ++i)
        for (int j = 0; j < two_n; ++j) A(i, j) = g(rng);
    Mat S = 0.5 * (A + A.transpose());
    return (J_matrix(two_n) * S).exp();
}

} // namespace

TEST_CASE("tau maps the diagonal to the zero section") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0, 1);
    for (int i = 0; i < 100; ++i) {
        Vec z(4), Z(4);
        for (int k = 0; k < 4; ++k) {
            z[k] = g(rng);
            Z[k] = g(rng);
        }
        auto [q, p] = tau(z, z);
        CHECK((q - z).norm() == 0.0);
        CHECK(p.norm() == 0.0);

        auto [q2, p2] = tau(z, Z);
        auto [zz, ZZ] = tau_inv(q2, p2);
        CHECK((zz - z).norm() < 1e-15);
        CHECK((ZZ - Z).norm() < 1e-15);
    }
    auto [q0, p0] = tau(Vec::Zero(4), Vec::Zero(4));
    CHECK(q0.norm() == 0.0);
    CHECK(p0.norm() == 0.0);
}

TEST_CASE("tau real-coordinate form") {
    // tau(z, Z) = ((z+Z)/2, J(z-Z)); in (x, y, X, Y) coordinates the base is
    // ((x+X)/2, (y+Y)/2) and the covector (Y-y, x-X). The thesis displays the
    // second momentum block with the opposite sign, which contradicts its own
    // complex form i(z-Z); the complex form is normative here (it is the one
    // that makes Q_t = -tan(pi t)|z|^2 generate e^{-2 pi i t}).
    Vec z(2), Z(2);
    z << 1.0, 2.0;   // x = 1, y = 2
    Z << 5.0, 11.0;  // X = 5, Y = 11
    auto [q, p] = tau(z, Z);
    CHECK(q[0] == doctest::Approx(3.0));
    CHECK(q[1] == doctest::Approx(6.5));
    CHECK(p[0] == doctest::Approx(9.0));   // Y - y
    CHECK(p[1] == doctest::Approx(-4.0));  // x - X
}

TEST_CASE("lift of the identity and of Reeb rotations") {
    LiftedMap lid = lift_map(Contactomorphism::identity(2));
    Vec z(4);
    z << 0.3, -1.2, 0.5, 2.0;
    CHECK((lid.evaluate(z) - z).norm() == 0.0);
    CHECK(lid.evaluate(Vec::Zero(4)).norm() == 0.0);

    // a_t(z) = e^{-2 pi i t} z: reeb_flow(-2 pi t)
    const double t = 0.22;
    LiftedMap lr = lift_map(Contactomorphism::unitary(
        diag_rotation2(-2 * M_PI * t, -2 * M_PI * t)));
    CHECK((lr.evaluate(z) - rotate_J(-2 * M_PI * t, z)).norm() < 1e-12);
}

TEST_CASE("lift homogeneity and flow-lift symplecticity") {
    Mat S = Mat::Zero(4, 4);
    S(0, 0) = S(2, 2) = 0.3;
    S(1, 1) = S(3, 3) = 0.7;
    Contactomorphism phi = Contactomorphism::flow(HamSpec::quadratic(S), 1.0);
    LiftedMap L = lift_map(phi);

    // closed-form flow matrix: block rotations by a_j
    Mat U = diag_rotation2(0.3, 0.7);
    for (const Vec& zs : sphere_samples(4, 10, 12)) {
        Vec z = 1.7 * zs;
        CHECK((L.evaluate(z) - U * z).norm() < 1e-8);
        CHECK((L.evaluate(2.0 * z) - 2.0 * L.evaluate(z)).norm() < 1e-8);
    }

    // omega preservation of the Jacobian away from 0: check omega(D e_i, D e_j)
    // on a nonlinear flow lift via the variational Jacobian
    HamSpec He = HamSpec::expression("x1^2 - 0.5*x1*y2 + y1*x2", 2);
    LiftedMap Le = lift_map(Contactomorphism::flow(He, 0.4));
    const Mat J = J_matrix(4);
    for (const Vec& zs : sphere_samples(4, 12, 14)) {
        Mat D = Le.jacobian(zs);
        CHECK((D.transpose() * J * D - J).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("lifted hamiltonian homogeneity") {
    HamSpec H = HamSpec::expression("x1^2 - y1*x1 + 0.5", 1);
    auto lifted = lift_hamiltonian(H);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0, 1);
    for (int i = 0; i < 50; ++i) {
        Vec z(2);
        z << g(rng), g(rng);
        if (z.norm() < 1e-3) continue;
        CHECK(lifted(2.0 * z, 0.1) == doctest::Approx(4.0 * lifted(z, 0.1)).epsilon(1e-12));
    }
    HamSpec Hq = HamSpec::quadratic((Mat(2, 2) << 1.0, 0.25, 0.25, -2.0).finished());
    Vec z(2);
    z << 0.4, -1.1;
    CHECK(Hq.lifted_value(z, 0) == doctest::Approx(z.dot(Hq.matrix() * z)));
    // constant Hamiltonian lifts to |z|^2
    HamSpec Hc = HamSpec::expression("1", 1);
    CHECK(Hc.lifted_value(z, 0) == doctest::Approx(z.squaredNorm()));
}

TEST_CASE("cayley generating form") {
    // complex scalar e^{-2 pi i t}: S = -tan(pi t) Id
    for (double t : {0.1, 0.25, 0.4}) {
        Mat U = diag_rotation2(-2 * M_PI * t, -2 * M_PI * t);
        QuadForm S = cayley_genfun(LinearSymplectomorphism(U));
        CHECK((S.matrix() + std::tan(M_PI * t) * Mat::Identity(4, 4)).cwiseAbs().maxCoeff() <
              1e-12);
    }
    // identity -> 0
    QuadForm S0 = cayley_genfun(LinearSymplectomorphism(Mat::Identity(4, 4)));
    CHECK(S0.matrix().cwiseAbs().maxCoeff() < 1e-14);

    // eigenvalue -1 rejected
    Mat Upi = diag_rotation2(M_PI, M_PI);
    CHECK_THROWS_AS(cayley_genfun(LinearSymplectomorphism(Upi)), NearIdentityMinusOne);

    // random symplectic: generated map equals Phi via the genfun route
    std::mt19937_64 rng(21);
    for (int i = 0; i < 6; ++i) {
        Mat Phi = random_symplectic(4, rng);
        QuadForm S = cayley_genfun(LinearSymplectomorphism(Phi));
        GenFun F = GenFun::quadratic(4, S);
        for (const Vec& x : sphere_samples(4, 50, 31 + i)) {
            auto [z, Z] = generated_map_point(F, x);  // k = 0: every point fiber-critical
            CHECK((Z - Phi * z).norm() < 1e-10 * std::max(1.0, z.norm()));
        }
    }
}

TEST_CASE("lift functoriality") {
    Mat S1 = Mat::Zero(4, 4), S2 = Mat::Zero(4, 4);
    S1(0, 0) = S1(2, 2) = 0.4;
    S1(1, 1) = S1(3, 3) = 0.2;
    S2(0, 0) = S2(2, 2) = -0.3;
    S2(1, 1) = S2(3, 3) = 0.6;
    Contactomorphism f1 = Contactomorphism::flow(HamSpec::quadratic(S1), 1.0);
    Contactomorphism f2 = Contactomorphism::flow(HamSpec::quadratic(S2), 1.0);
    // composite unitary
    Contactomorphism f21 = Contactomorphism::unitary(diag_rotation2(0.4 - 0.3, 0.2 + 0.6));
    LiftedMap L1 = lift_map(f1), L2 = lift_map(f2), L21 = lift_map(f21);
    for (const Vec& zs : sphere_samples(4, 8, 40)) {
        Vec z = 0.8 * zs;
        CHECK((L2.evaluate(L1.evaluate(z)) - L21.evaluate(z)).norm() < 1e-7);
    }
}

TEST_CASE("discriminant points correspond to fixed rays of the lift") {
    Contactomorphism mixed = Contactomorphism::unitary(diag_rotation2(0.0, 1.0));
    LiftedMap L = lift_map(mixed);
    Vec p = Vec::Unit(4, 0);  // e_x1 is a discriminant point
    for (double lam : {0.5, 1.0, 2.0}) {
        CHECK((L.evaluate(lam * p) - lam * p).norm() < 1e-12);
    }
    Vec q = Vec::Ones(4).normalized();  // not a discriminant point
    CHECK((L.evaluate(q) - q).norm() > 1e-3);
}

TEST_CASE("jacobian rejected near zero") {
    LiftedMap L = lift_map(Contactomorphism::identity(1));
    CHECK_THROWS_AS(L.jacobian(Vec::Zero(2)), JacobianUnavailable);
}
