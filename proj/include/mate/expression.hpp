#pragma once

#include <string>
#include <vector>

#include "mate/vec.hpp"

namespace mate {

// Evaluation environment for config-defined scalar fields.
struct EvalEnv {
    Vec2 x;
    double z = 0.0;
    Vec2 p;
};

// Arithmetic expressions over (x1, x2, z, p1, p2) plus the shorthand
// r2 = x1^2 + x2^2.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' atom)?
//   atom   := number | ident | '(' expr ')' | func '(' expr (',' expr)* ')'
//
// func in {exp, log, sin, cos, sqrt, min, max, abs}. A leading '-' on a
// factor is accepted as a convenience. Parsed once into a flat node table,
// evaluation is allocation-free.
class Expression {
public:
    static Expression parse(const std::string& text);

    double operator()(const EvalEnv& env) const;
    const std::string& text() const { return text_; }

private:
    enum class Op : unsigned char {
        num, var, add, sub, mul, div, pow, neg,
        f_exp, f_log, f_sin, f_cos, f_sqrt, f_abs, f_min, f_max,
    };
    struct Node {
        Op op;
        double value = 0.0;  // num
        int var = 0;         // var: 0..5 = x1,x2,z,p1,p2,r2
        int lhs = -1;
        int rhs = -1;
    };
    std::vector<Node> nodes_;
    int root_ = -1;
    std::string text_;

    double eval_node(int idx, const EvalEnv& env) const;
    friend class ExprParser;
};

}  // namespace mate
