#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gf/errors.hpp"
#include "gf/genfun.hpp"
#include "gf/homology.hpp"

using namespace gf;

namespace {

QuadForm diag_form(std::initializer_list<double> d) {
    Vec v(static_cast<Eigen::Index>(d.size()));
    int i = 0;
    for (double x : d) v[i++] = x;
    return QuadForm(Mat(v.asDiagonal()));
}

} // namespace

TEST_CASE("index and nullity") {
    CHECK(index_nullity(Mat(-Mat::Identity(3, 3))).index == 3);
    CHECK(index_nullity(Mat(-Mat::Identity(3, 3))).nullity == 0);
    Inertia in = index_nullity(diag_form({-1, 0, 1}));
    CHECK(in.index == 1);
    CHECK(in.nullity == 1);
    CHECK(in.positive == 1);
    // relative threshold: tiny eigenvalues scale with the spectral radius
    Mat S = Mat::Zero(2, 2);
    S(0, 0) = 1e8;
    S(1, 1) = 1e-4;
    CHECK(index_nullity(S).nullity == 1);
}

TEST_CASE("quadratic sublevel types") {
    CHECK(quad_sublevel_type(diag_form({1, 2, 3})).is_empty());
    auto t1 = quad_sublevel_type(diag_form({-1, -1, 1}));
    CHECK(t1.kind == SublevelType::Kind::Sphere);
    CHECK(t1.sphere_dim == 1);
    // degenerate: the 0-sublevel of diag(-1,0,1) is a pinched annulus ~ S^1
    auto t2 = quad_sublevel_type(diag_form({-1, 0, 1}));
    CHECK(t2.sphere_dim == 1);
    // invariance under orthogonal conjugation and positive scaling
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g(0, 1);
    Mat A(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = g(rng);
    Eigen::HouseholderQR<Mat> qr(A);
    Mat Q = qr.householderQ();
    Mat S = diag_form({-2, 0.5, 3}).matrix();
    auto a = quad_sublevel_type(QuadForm(S));
    auto b = quad_sublevel_type(QuadForm(Mat(Q.transpose() * S * Q)));
    auto c = quad_sublevel_type(QuadForm(Mat(7.5 * S)));
    CHECK(a.sphere_dim == b.sphere_dim);
    CHECK(a.sphere_dim == c.sphere_dim);
}

TEST_CASE("join betti") {
    // S^0 * S^0 = S^1
    CHECK(join_betti(0, SublevelType::sphere(0)) == BettiVector::sphere(1));
    // M * {} = M
    CHECK(join_betti(2, SublevelType::empty()) == BettiVector::sphere(2));
    // pure index shift
    BettiVector b({0, 3});
    CHECK(join_betti(2, SublevelType::explicit_betti(b)).at(4) == 3);
    // associativity: (S^{d1} * S^{d2}) * X = S^{d1+d2+1} * X at Betti level
    SublevelType X = SublevelType::sphere(1);
    BettiVector lhs = join_betti(2, SublevelType::explicit_betti(join_betti(1, X)));
    BettiVector rhs = join_betti(2 + 1 + 1, X);
    CHECK(lhs == rhs);
}

TEST_CASE("brute force betti basic cases") {
    auto whole = brute_force_betti(3, [](const Vec&) { return -1.0; }, 0.0, 1);
    CHECK_FALSE(whole.empty);
    CHECK(whole.betti == BettiVector::sphere(2));

    auto none = brute_force_betti(3, [](const Vec&) { return 1.0; }, 0.0, 1);
    CHECK(none.empty);
    CHECK(none.betti == BettiVector());

    QuadForm band = diag_form({-1, -1, 1});
    auto r = brute_force_betti(3, [&](const Vec& x) { return band.value(x); }, -1e-6, 2);
    CHECK(r.betti == BettiVector::sphere(1));

    // circle case S^1 in R^2
    QuadForm half = diag_form({-1, 1});
    auto rc = brute_force_betti(2, [&](const Vec& x) { return half.value(x); }, -1e-6, 3);
    CHECK(rc.betti == BettiVector::sphere(0));
}

TEST_CASE("degenerate form: level zero vs strictly negative level") {
    QuadForm Q = diag_form({-1, 0, 1});
    // at level 0 the pinch points connect the two lobes: S^{ind+null-1} = S^1
    auto at_zero = brute_force_betti(3, [&](const Vec& x) { return Q.value(x); }, 0.0, 2);
    CHECK(at_zero.betti == BettiVector::sphere(1));
    // at a strictly negative level the lobes detach: S^{ind-1} = S^0
    auto below = brute_force_betti(3, [&](const Vec& x) { return Q.value(x); }, -1e-6, 2);
    CHECK(below.betti == BettiVector::sphere(0));
}

TEST_CASE("brute force betti on S^3") {
    QuadForm Q = diag_form({-1, -1, 1, 1});
    auto r = brute_force_betti(4, [&](const Vec& x) { return Q.value(x); }, -1e-6, 1);
    CHECK(r.betti == BettiVector::sphere(1));

    QuadForm Q3 = diag_form({-1, -1, -1, 1});
    auto r3 = brute_force_betti(4, [&](const Vec& x) { return Q3.value(x); }, -1e-6, 1);
    CHECK(r3.betti == BettiVector::sphere(2));
}

TEST_CASE("direct sum join checks") {
    // S^0 * S^0 = S^1
    auto r1 = direct_sum_join_check(diag_form({-1}), diag_form({-1}));
    CHECK(r1.match);
    CHECK(r1.oracle == BettiVector::sphere(1));

    // positive-definite factor: join degenerates to the other factor
    auto r2 = direct_sum_join_check(diag_form({1}), diag_form({-1, 1}));
    CHECK(r2.match);
    CHECK(r2.oracle == BettiVector::sphere(0));

    auto r3 = direct_sum_join_check(diag_form({-1, 1}), diag_form({-1, 1}));
    CHECK(r3.match);
    CHECK(r3.oracle == BettiVector::sphere(1));

    // both empty
    auto r4 = direct_sum_join_check(diag_form({1}), diag_form({1, 1}));
    CHECK(r4.match);
    CHECK(r4.oracle == BettiVector());
}

TEST_CASE("composed sublevel betti formulas") {
    const int ind0 = index_nullity(reeb_family(1, 0).quad()).index;
    const int ind1 = index_nullity(reeb_family(1, 1).quad()).index;
    CHECK(ind1 - ind0 == 2);
    CHECK(composed_sublevel_betti(1, 0, SublevelType::empty()) == BettiVector::sphere(ind0));
    CHECK(composed_sublevel_betti(1, 1, SublevelType::empty()).at(ind1) == 1);
    CHECK(composed_sublevel_betti(1, 0, SublevelType::sphere(2)).at(ind0 + 2) == 1);
    CHECK_THROWS(composed_sublevel_betti(1, 2, SublevelType::empty()));
}

TEST_CASE("composed sublevel betti agrees with the assembled matrices") {
    // index arithmetic consistency of {F # A_t <= 0} with the formula,
    // using F_sub = type of {F # 0 <= 0}
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0, 1);
    for (int n : {1, 2}) {
        for (int trial = 0; trial < 4; ++trial) {
            Mat A(2 * n, 2 * n);
            for (int i = 0; i < 2 * n; ++i)
                for (int j = 0; j < 2 * n; ++j) A(i, j) = g(rng);
            QuadForm Fq(0.5 * (A + A.transpose()));
            GenFun F = GenFun::quadratic(2 * n, Fq);
            GenFun zero = GenFun::quadratic(2 * n, QuadForm::zero(2 * n));
            SublevelType F_sub = quad_sublevel_type(compose(F, zero).quad());
            // {F # 0 <= 0} is never empty: it contains the zeta_2 sphere
            CHECK_FALSE(F_sub.is_empty());
            for (int t : {0, 1}) {
                BettiVector via_formula = composed_sublevel_betti(n, t, F_sub);
                SublevelType direct = quad_sublevel_type(compose(F, reeb_family(n, t)).quad());
                CHECK(via_formula == direct.to_betti());
            }
        }
    }
}

TEST_CASE("reparametrization invariance of composed sublevels") {
    // Betti of {F o Psi # G <= 0} equals Betti of {F # G <= 0} for
    // fiber-preserving invertible linear Psi
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g(0, 1);
    const int b = 2, k = 2, m = b + k;
    Mat A(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A(i, j) = g(rng);
    QuadForm Fq(0.5 * (A + A.transpose()));
    // Psi(zeta, nu) = (zeta, L nu + D zeta), L invertible
    Mat Psi = Mat::Identity(m, m);
    Psi(2, 0) = 0.7;
    Psi(3, 1) = -0.4;
    Psi(2, 2) = 2.0;
    Psi(3, 2) = 0.3;
    QuadForm Fq2(Psi.transpose() * Fq.matrix() * Psi);
    GenFun F = GenFun::quadratic(b, Fq);
    GenFun F2 = GenFun::quadratic(b, Fq2);
    GenFun G = reeb_family(1, 0.3);
    Inertia i1 = index_nullity(compose(F, G).quad());
    Inertia i2 = index_nullity(compose(F2, G).quad());
    CHECK(i1.index == i2.index);
    CHECK(i1.nullity == i2.nullity);
}

TEST_CASE("resolution too coarse error") {
    // a thin band around a great circle misaligned with the mesh: invisible at
    // level 0, a full circle one subdivision later
    auto thin = [](const Vec& x) {
        const double s = x[0] + x[1] + x[2];
        return s * s - 0.005;
    };
    CHECK_THROWS_AS(brute_force_betti(3, thin, 0.0, 0), ResolutionTooCoarse);
}

TEST_CASE("off export") {
    QuadForm band = diag_form({-1, -1, 1});
    std::string off = sublevel_mesh_off(3, [&](const Vec& x) { return band.value(x); }, 0.0, 1);
    CHECK(off.substr(0, 3) == "OFF");
    CHECK(off.find('\n') != std::string::npos);
}
