#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gf/errors.hpp"
#include "gf/hamlang.hpp"

using namespace gf;
using namespace gf::hamlang;

TEST_CASE("parse basic expression structure") {
    auto ast = parse("x1*y1 + 0.1*sin(t)", 1);
    CHECK(ast->kind == NodeKind::Add);

    Vec p(2);
    p << 0.6, 0.8;
    CHECK(eval(ast, 1, p, 0.0) == doctest::Approx(0.48));
}

TEST_CASE("unknown variable reports position") {
    CHECK_THROWS_AS(parse("x3", 2), UnknownVariable);
    try {
        parse("x3", 2);
    } catch (const UnknownVariable& e) {
        CHECK(e.position == 0);
    }
    CHECK_THROWS_AS(parse("foo(x1)", 1), UnknownVariable);
    CHECK_THROWS_AS(parse("x1 +", 1), SyntaxError);
    CHECK_THROWS_AS(parse("sin x1", 1), SyntaxError);
}

TEST_CASE("norm expression is 1 on the unit circle") {
    auto ast = parse("x1^2 + y1^2", 1);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 2 * M_PI);
    for (int i = 0; i < 25; ++i) {
        double a = u(rng);
        Vec p(2);
        p << std::cos(a), std::sin(a);
        CHECK(eval(ast, 1, p, 0.3) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("precedence and associativity") {
    Vec p(2);
    p << 2.0, 3.0;
    CHECK(eval(parse("x1+y1*2", 1), 1, p, 0) == doctest::Approx(8.0));
    CHECK(eval(parse("-x1^2", 1), 1, p, 0) == doctest::Approx(-4.0));
    CHECK(eval(parse("x1-y1-1", 1), 1, p, 0) == doctest::Approx(-2.0));
    CHECK(eval(parse("12/y1/2", 1), 1, p, 0) == doctest::Approx(2.0));
    CHECK(eval(parse("2e-1*x1", 1), 1, p, 0) == doctest::Approx(0.4));
}

TEST_CASE("gradient examples") {
    Vec e1(2);
    e1 << 1.0, 0.0;

    auto r = eval_with_gradient(parse("x1^2", 1), 1, e1, 0.0);
    CHECK(r.value == doctest::Approx(1.0));
    CHECK(r.gradient[0] == doctest::Approx(2.0));
    CHECK(r.gradient[1] == doctest::Approx(0.0));
    CHECK(r.dt == doctest::Approx(0.0));

    r = eval_with_gradient(parse("sin(t)*x1", 1), 1, e1, 0.0);
    CHECK(r.value == doctest::Approx(0.0));
    CHECK(r.gradient[0] == doctest::Approx(0.0));
    CHECK(r.dt == doctest::Approx(1.0));
}

TEST_CASE("division by zero raises DomainError") {
    Vec p(2);
    p << 0.0, 1.0;
    CHECK_THROWS_AS(eval(parse("1/x1", 1), 1, p, 0), DomainError);
}

TEST_CASE("print round-trip is idempotent") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        const int n = 1 + static_cast<int>(rng() % 3);
        auto ast = random_ast(n, 4, rng());
        std::string s1 = print(ast, n);
        auto re = parse(s1, n);
        CHECK(print(re, n) == s1);
    }
}

TEST_CASE("gradient linearity in dual seeds") {
    // d(f+g) = df + dg on shared evaluation points
    auto f = parse("sin(x1*y1)+x1^3", 1);
    auto g = parse("cos(y1)-t*x1", 1);
    auto fg = parse("sin(x1*y1)+x1^3 + (cos(y1)-t*x1)", 1);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0, 1);
    for (int i = 0; i < 20; ++i) {
        Vec p(2);
        p << gauss(rng), gauss(rng);
        double t = gauss(rng);
        auto a = eval_with_gradient(f, 1, p, t);
        auto b = eval_with_gradient(g, 1, p, t);
        auto c = eval_with_gradient(fg, 1, p, t);
        CHECK((a.gradient + b.gradient - c.gradient).norm() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(a.dt + b.dt == doctest::Approx(c.dt).epsilon(1e-12));
    }
}
