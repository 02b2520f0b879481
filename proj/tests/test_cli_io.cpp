#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gf/json_io.hpp"
#include "gf/sweep.hpp"

using namespace gf;

TEST_CASE("hamspec json round trip") {
    Mat S = (Mat(2, 2) << 1.0, 0.5, 0.5, -2.0).finished();
    HamSpec h = HamSpec::quadratic(S);
    HamSpec back = hamspec_from_json(hamspec_to_json(h));
    CHECK(back.is_quadratic());
    CHECK((back.matrix() - S).cwiseAbs().maxCoeff() == 0.0);

    HamSpec e = HamSpec::expression("0.3*(x1^2+y1^2)+sin(t)*x1", 1);
    HamSpec eb = hamspec_from_json(hamspec_to_json(e));
    CHECK_FALSE(eb.is_quadratic());
    Vec p(2);
    p << 0.6, 0.8;
    CHECK(eb.value(p, 0.2) == doctest::Approx(e.value(p, 0.2)));
}

TEST_CASE("contactomorphism json round trip") {
    Json j = {{"kind", "flow"},
              {"hamiltonian", {{"n", 1}, {"kind", "expr"}, {"expr", "x1*y1"}}},
              {"time", 0.5}};
    Contactomorphism c = contactomorphism_from_json(j);
    CHECK_FALSE(c.is_unitary());
    CHECK(c.time() == 0.5);
    Json back = contactomorphism_to_json(c);
    CHECK(back.at("kind") == "flow");
    CHECK(back.at("hamiltonian").at("expr") == "x1*y1");

    Contactomorphism u = Contactomorphism::identity(2);
    Contactomorphism ub = contactomorphism_from_json(contactomorphism_to_json(u));
    CHECK(ub.is_unitary());
}

TEST_CASE("quadform json") {
    QuadForm q(Mat::Identity(4, 4));
    Json j = quadform_to_json(q, 2);
    auto [back, base] = quadform_from_json(j);
    CHECK(base == 2);
    CHECK((back.matrix() - q.matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(j.at("dim") == 4);
}

TEST_CASE("ledger serialization") {
    Mat U = Mat::Zero(4, 4);
    const double a1 = 0.5, a2 = 1.2;
    U(0, 0) = std::cos(a1);
    U(0, 2) = -std::sin(a1);
    U(2, 0) = std::sin(a1);
    U(2, 2) = std::cos(a1);
    U(1, 1) = std::cos(a2);
    U(1, 3) = -std::sin(a2);
    U(3, 1) = std::sin(a2);
    U(3, 3) = std::cos(a2);
    SweepLedger led = quadratic_sweep(Contactomorphism::unitary(U), 120);
    Json j = ledger_to_json(led);
    CHECK(j.at("schema_version") == kSchemaVersion);
    CHECK(j.at("crossings").size() == 2);
    CHECK(j.at("translated_points_with_multiplicity") == 4);
    CHECK(j.at("hypothesis_status") == "met");

    std::string csv = ledger_to_csv(led);
    CHECK(csv.rfind("t,index,multiplicity", 0) == 0);
    // one line per grid sample plus header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 121);
}

TEST_CASE("matrix json errors") {
    CHECK_THROWS(matrix_from_json(Json::array()));
    Json ragged = Json::array({Json::array({1.0, 2.0}), Json::array({1.0})});
    CHECK_THROWS(matrix_from_json(ragged));
}
