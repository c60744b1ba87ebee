#include "doctest.h"

#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "mate/errors.hpp"
#include "mate/expression.hpp"

using namespace mate;

namespace {

// Independent reference evaluator: parses and evaluates in a single pass,
// no AST. Kept deliberately separate from the library implementation.
struct RefEval {
    const std::string& s;
    std::size_t i = 0;
    const EvalEnv& env;

    double run() {
        double v = expr();
        ws();
        if (i != s.size()) throw std::runtime_error("trailing");
        return v;
    }
    void ws() { while (i < s.size() && std::isspace((unsigned char)s[i])) ++i; }
    bool eat(char c) { ws(); if (i < s.size() && s[i] == c) { ++i; return true; } return false; }
    double expr() {
        double v = term();
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }
    double term() {
        double v = factor();
        for (;;) {
            if (eat('*')) v *= factor();
            else if (eat('/')) v /= factor();
            else return v;
        }
    }
    double factor() {
        if (eat('-')) return -factor();
        double v = atom();
        if (eat('^')) return std::pow(v, atom());
        return v;
    }
    double atom() {
        ws();
        if (eat('(')) {
            double v = expr();
            eat(')');
            return v;
        }
        if (std::isdigit((unsigned char)s[i]) || s[i] == '.') {
            std::size_t used;
            double v = std::stod(s.substr(i), &used);
            i += used;
            return v;
        }
        std::size_t start = i;
        while (i < s.size() && (std::isalnum((unsigned char)s[i]) || s[i] == '_')) ++i;
        std::string name = s.substr(start, i - start);
        if (name == "x1") return env.x.x;
        if (name == "x2") return env.x.y;
        if (name == "z") return env.z;
        if (name == "p1") return env.p.x;
        if (name == "p2") return env.p.y;
        if (name == "r2") return env.x.x * env.x.x + env.x.y * env.x.y;
        eat('(');
        double a = expr();
        double b = 0.0;
        bool two = eat(',');
        if (two) b = expr();
        eat(')');
        if (name == "exp") return std::exp(a);
        if (name == "log") return std::log(a);
        if (name == "sin") return std::sin(a);
        if (name == "cos") return std::cos(a);
        if (name == "sqrt") return std::sqrt(a);
        if (name == "abs") return std::abs(a);
        if (name == "min") return std::min(a, b);
        if (name == "max") return std::max(a, b);
        throw std::runtime_error("unknown " + name);
    }
};

double reference(const std::string& text, const EvalEnv& env) {
    RefEval r{text, 0, env};
    return r.run();
}

}  // namespace

TEST_CASE("basic values") {
    EvalEnv env;
    CHECK(Expression::parse("1")(env) == 1.0);

    env.x = {1, 0};
    CHECK(Expression::parse("1 - (x1^2+x2^2)^2/4")(env) == doctest::Approx(0.75).epsilon(1e-15));

    env.z = 0.25;
    CHECK(Expression::parse("z - 3/4")(env) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("syntax errors carry a position") {
    CHECK_THROWS_AS(Expression::parse("1 + * 2"), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("(1 + 2"), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("min(1)"), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("foo + 1"), UnknownIdentifier);
    try {
        Expression::parse("1 + @");
    } catch (const SyntaxError& e) {
        CHECK(e.position == 4);
    }
}

TEST_CASE("agrees with reference interpreter on fixed corpus") {
    const std::vector<std::string> corpus = {
        "1",
        "2 + 3 * 4",
        "2 * 3 + 4",
        "10 - 4 - 3",
        "24 / 4 / 2",
        "2^3",
        "2^3 * 2",
        "x1 + x2",
        "x1 * x2 - z",
        "p1^2 + p2^2",
        "r2",
        "1 - r2^2/4",
        "z - 3/2",
        "z - 3/4",
        "exp(z)",
        "log(1 + r2)",
        "sin(x1) * cos(x2)",
        "sqrt(r2 + 1)",
        "abs(z - 1)",
        "min(x1, x2)",
        "max(p1, p2)",
        "min(1, max(2, z))",
        "(x1 + x2)^2",
        "1e-3 * x1",
        "2.5e2 - z",
        "1/4 - r2^2/64",
        "exp(x1) + exp(x2)",
        "cos(r2)^2 + sin(r2)^2",
        "x1 * (x2 + z) * (p1 - p2)",
        "sqrt(abs(x1 - x2)) + 1",
    };
    REQUIRE(corpus.size() == 30);
    const EvalEnv envs[] = {
        {{0.3, -0.7}, 0.5, {1.2, -0.4}},
        {{1.0, 2.0}, -1.25, {0.0, 3.0}},
        {{-0.5, 0.25}, 2.0, {-1.0, -2.0}},
    };
    for (const std::string& text : corpus) {
        Expression e = Expression::parse(text);
        for (const EvalEnv& env : envs) {
            double got = e(env);
            double want = reference(text, env);
            CHECK(got == doctest::Approx(want).epsilon(1e-14));
        }
    }
}
