#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gf/linalg.hpp"

namespace gf::hamlang {

// Expression language for time-dependent Hamiltonians on the sphere.
// Variables x1..xn, y1..yn, t; operators + - * / unary- and integer ^;
// functions sin, cos, exp.

enum class NodeKind { Literal, Variable, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

struct HamAst {
    NodeKind kind;
    double literal = 0.0;   // Literal
    int var_index = -1;     // Variable: 0..2n-1 ambient coords, 2n means t
    int exponent = 0;       // Pow
    std::shared_ptr<const HamAst> a, b;
};

using AstPtr = std::shared_ptr<const HamAst>;

// Recursive-descent parse; n is the number of complex coordinates.
// Throws SyntaxError / UnknownVariable with position info.
AstPtr parse(const std::string& src, int n);

// Canonical printer; parse(print(ast, n), n) reproduces the tree.
std::string print(const AstPtr& ast, int n);

struct EvalResult {
    double value;
    Vec gradient;  // d/dx_j, d/dy_j (length 2n)
    double dt;
};

// Forward-mode dual-number evaluation at an ambient point.
EvalResult eval_with_gradient(const AstPtr& ast, int n, const Vec& point, double t);

double eval(const AstPtr& ast, int n, const Vec& point, double t);

// Random AST of bounded depth, for property tests.
AstPtr random_ast(int n, int max_depth, std::uint64_t seed);

} // namespace gf::hamlang
