#include "gf/hamlang.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>

#include "gf/errors.hpp"

namespace gf::hamlang {

namespace {

AstPtr node(HamAst n) { return std::make_shared<const HamAst>(std::move(n)); }

struct Parser {
    const std::string& src;
    int n;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    AstPtr parse_expr() {
        AstPtr lhs = parse_term();
        for (;;) {
            if (eat('+')) {
                lhs = node({NodeKind::Add, 0, -1, 0, lhs, parse_term()});
            } else if (eat('-')) {
                lhs = node({NodeKind::Sub, 0, -1, 0, lhs, parse_term()});
            } else {
                return lhs;
            }
        }
    }

    AstPtr parse_term() {
        AstPtr lhs = parse_factor();
        for (;;) {
            if (eat('*')) {
                lhs = node({NodeKind::Mul, 0, -1, 0, lhs, parse_factor()});
            } else if (eat('/')) {
                lhs = node({NodeKind::Div, 0, -1, 0, lhs, parse_factor()});
            } else {
                return lhs;
            }
        }
    }

    AstPtr parse_factor() {
        if (eat('-')) {
            AstPtr f = parse_factor();
            if (f->kind == NodeKind::Literal)
                return node({NodeKind::Literal, -f->literal, -1, 0, nullptr, nullptr});
            return node({NodeKind::Neg, 0, -1, 0, f, nullptr});
        }
        return parse_power();
    }

    AstPtr parse_power() {
        AstPtr base = parse_atom();
        if (eat('^')) {
            bool neg = eat('-');
            skip_ws();
            std::size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            if (pos == start) throw SyntaxError(start, "integer exponent");
            int e = std::atoi(src.substr(start, pos - start).c_str());
            return node({NodeKind::Pow, 0, -1, neg ? -e : e, base, nullptr});
        }
        return base;
    }

    AstPtr parse_atom() {
        skip_ws();
        if (pos >= src.size()) throw SyntaxError(pos, "operand");
        char c = src[pos];
        if (c == '(') {
            ++pos;
            AstPtr inner = parse_expr();
            if (!eat(')')) throw SyntaxError(pos, "')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw SyntaxError(pos, "number, variable or '('");
    }

    AstPtr parse_number() {
        std::size_t start = pos;
        while (pos < src.size() && (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.')) ++pos;
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            ++pos;
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
            std::size_t dstart = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            if (pos == dstart) throw SyntaxError(pos, "exponent digits");
        }
        double v = std::strtod(src.substr(start, pos - start).c_str(), nullptr);
        return node({NodeKind::Literal, v, -1, 0, nullptr, nullptr});
    }

    AstPtr parse_ident() {
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        std::string name = src.substr(start, pos - start);

        if (name == "sin" || name == "cos" || name == "exp") {
            if (!eat('(')) throw SyntaxError(pos, "'(' after function name");
            AstPtr arg = parse_expr();
            if (!eat(')')) throw SyntaxError(pos, "')'");
            NodeKind k = name == "sin" ? NodeKind::Sin : name == "cos" ? NodeKind::Cos : NodeKind::Exp;
            return node({k, 0, -1, 0, arg, nullptr});
        }
        if (name == "t") return node({NodeKind::Variable, 0, 2 * n, 0, nullptr, nullptr});
        if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1) {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
            if (digits) {
                int idx = std::atoi(name.c_str() + 1);
                if (idx < 1 || idx > n) throw UnknownVariable(start, name);
                return node({NodeKind::Variable, 0, (name[0] == 'x' ? idx - 1 : n + idx - 1),
                             0, nullptr, nullptr});
            }
        }
        throw UnknownVariable(start, name);
    }
};

// value plus 2n+1 partials (ambient coords then t)
struct Dual {
    double v;
    Vec d;
};

Dual eval_dual(const HamAst& a, int n, const Vec& point, double t) {
    const int m = 2 * n + 1;
    auto zero = [&] { return Vec::Zero(m).eval(); };
    switch (a.kind) {
        case NodeKind::Literal:
            return {a.literal, zero()};
        case NodeKind::Variable: {
            Vec d = zero();
            d[a.var_index] = 1.0;
            return {a.var_index == 2 * n ? t : point[a.var_index], d};
        }
        case NodeKind::Neg: {
            Dual x = eval_dual(*a.a, n, point, t);
            return {-x.v, -x.d};
        }
        case NodeKind::Add: {
            Dual x = eval_dual(*a.a, n, point, t), y = eval_dual(*a.b, n, point, t);
            return {x.v + y.v, x.d + y.d};
        }
        case NodeKind::Sub: {
            Dual x = eval_dual(*a.a, n, point, t), y = eval_dual(*a.b, n, point, t);
            return {x.v - y.v, x.d - y.d};
        }
        case NodeKind::Mul: {
            Dual x = eval_dual(*a.a, n, point, t), y = eval_dual(*a.b, n, point, t);
            return {x.v * y.v, x.v * y.d + y.v * x.d};
        }
        case NodeKind::Div: {
            Dual x = eval_dual(*a.a, n, point, t), y = eval_dual(*a.b, n, point, t);
            if (std::abs(y.v) < 1e-300) throw DomainError("division by zero");
            return {x.v / y.v, (x.d - (x.v / y.v) * y.d) / y.v};
        }
        case NodeKind::Pow: {
            Dual x = eval_dual(*a.a, n, point, t);
            int e = a.exponent;
            if (e == 0) return {1.0, zero()};
            if (e < 0 && std::abs(x.v) < 1e-300) throw DomainError("zero raised to negative power");
            double p = std::pow(x.v, e);
            double dp = e * std::pow(x.v, e - 1);
            return {p, dp * x.d};
        }
        case NodeKind::Sin: {
            Dual x = eval_dual(*a.a, n, point, t);
            return {std::sin(x.v), std::cos(x.v) * x.d};
        }
        case NodeKind::Cos: {
            Dual x = eval_dual(*a.a, n, point, t);
            return {std::cos(x.v), -std::sin(x.v) * x.d};
        }
        case NodeKind::Exp: {
            Dual x = eval_dual(*a.a, n, point, t);
            double e = std::exp(x.v);
            return {e, e * x.d};
        }
    }
    throw Error("unreachable ast node");
}

std::string print_node(const HamAst& a, int n);

std::string print_child(const HamAst& a, int n) { return "(" + print_node(a, n) + ")"; }

std::string print_node(const HamAst& a, int n) {
    std::ostringstream os;
    os.precision(17);
    switch (a.kind) {
        case NodeKind::Literal:
            os << a.literal;
            return os.str();
        case NodeKind::Variable:
            if (a.var_index == 2 * n) return "t";
            if (a.var_index < n) return "x" + std::to_string(a.var_index + 1);
            return "y" + std::to_string(a.var_index - n + 1);
        case NodeKind::Neg:
            return "-" + print_child(*a.a, n);
        case NodeKind::Add:
            return print_child(*a.a, n) + "+" + print_child(*a.b, n);
        case NodeKind::Sub:
            return print_child(*a.a, n) + "-" + print_child(*a.b, n);
        case NodeKind::Mul:
            return print_child(*a.a, n) + "*" + print_child(*a.b, n);
        case NodeKind::Div:
            return print_child(*a.a, n) + "/" + print_child(*a.b, n);
        case NodeKind::Pow:
            return print_child(*a.a, n) + "^" + std::to_string(a.exponent);
        case NodeKind::Sin:
            return "sin(" + print_node(*a.a, n) + ")";
        case NodeKind::Cos:
            return "cos(" + print_node(*a.a, n) + ")";
        case NodeKind::Exp:
            return "exp(" + print_node(*a.a, n) + ")";
    }
    return "";
}

} // namespace

AstPtr parse(const std::string& src, int n) {
    if (n < 1) throw ArityError("n must be >= 1");
    Parser p{src, n};
    AstPtr ast = p.parse_expr();
    p.skip_ws();
    if (p.pos != src.size()) throw SyntaxError(p.pos, "end of input");
    return ast;
}

std::string print(const AstPtr& ast, int n) { return print_node(*ast, n); }

EvalResult eval_with_gradient(const AstPtr& ast, int n, const Vec& point, double t) {
    Dual d = eval_dual(*ast, n, point, t);
    EvalResult r;
    r.value = d.v;
    r.gradient = d.d.head(2 * n);
    r.dt = d.d[2 * n];
    return r;
}

double eval(const AstPtr& ast, int n, const Vec& point, double t) {
    return eval_dual(*ast, n, point, t).v;
}

AstPtr random_ast(int n, int max_depth, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::function<AstPtr(int)> gen = [&](int depth) -> AstPtr {
        int leaf_cut = depth >= max_depth ? 2 : 8;
        int pick = static_cast<int>(rng() % static_cast<std::uint64_t>(leaf_cut));
        switch (pick) {
            case 0:
                return node({NodeKind::Literal, coef(rng), -1, 0, nullptr, nullptr});
            case 1: {
                int vi = static_cast<int>(rng() % static_cast<std::uint64_t>(2 * n + 1));
                return node({NodeKind::Variable, 0, vi, 0, nullptr, nullptr});
            }
            case 2:
                return node({NodeKind::Add, 0, -1, 0, gen(depth + 1), gen(depth + 1)});
            case 3:
                return node({NodeKind::Sub, 0, -1, 0, gen(depth + 1), gen(depth + 1)});
            case 4:
                return node({NodeKind::Mul, 0, -1, 0, gen(depth + 1), gen(depth + 1)});
            case 5:
                return node({NodeKind::Sin, 0, -1, 0, gen(depth + 1), nullptr});
            case 6:
                return node({NodeKind::Cos, 0, -1, 0, gen(depth + 1), nullptr});
            default: {
                int e = 1 + static_cast<int>(rng() % 3);
                return node({NodeKind::Pow, 0, -1, e, gen(depth + 1), nullptr});
            }
        }
    };
    return gen(0);
}

} // namespace gf::hamlang
