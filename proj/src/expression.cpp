#include "mate/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

#include "mate/errors.hpp"

namespace mate {

namespace {
const std::map<std::string, int> kVars = {
    {"x1", 0}, {"x2", 1}, {"z", 2}, {"p1", 3}, {"p2", 4}, {"r2", 5},
};
}  // namespace

class ExprParser {
public:
    explicit ExprParser(const std::string& text) : text_(text) {}

    Expression run() {
        Expression e;
        e.text_ = text_;
        nodes_ = &e.nodes_;
        e.root_ = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            throw SyntaxError("unexpected trailing input", pos_);
        return e;
    }

private:
    using Op = Expression::Op;
    const std::string& text_;
    std::size_t pos_ = 0;
    std::vector<Expression::Node>* nodes_ = nullptr;

    int add_node(Expression::Node n) {
        nodes_->push_back(n);
        return static_cast<int>(nodes_->size()) - 1;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            throw SyntaxError(std::string("expected '") + c + "'", pos_);
    }

    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = add_node({Op::add, 0, 0, lhs, parse_term()});
            else if (accept('-'))
                lhs = add_node({Op::sub, 0, 0, lhs, parse_term()});
            else
                return lhs;
        }
    }

    int parse_term() {
        int lhs = parse_factor();
        for (;;) {
            if (accept('*'))
                lhs = add_node({Op::mul, 0, 0, lhs, parse_factor()});
            else if (accept('/'))
                lhs = add_node({Op::div, 0, 0, lhs, parse_factor()});
            else
                return lhs;
        }
    }

    int parse_factor() {
        if (accept('-'))
            return add_node({Op::neg, 0, 0, parse_factor(), -1});
        int base = parse_atom();
        if (accept('^'))
            return add_node({Op::pow, 0, 0, base, parse_atom()});
        return base;
    }

    int parse_atom() {
        skip_ws();
        if (pos_ >= text_.size())
            throw SyntaxError("unexpected end of expression", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            int inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw SyntaxError("unexpected character", pos_);
    }

    int parse_number() {
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw SyntaxError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        Expression::Node n{Op::num, v, 0, -1, -1};
        return add_node(n);
    }

    int parse_ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);

        static const std::map<std::string, Op> funcs = {
            {"exp", Op::f_exp}, {"log", Op::f_log}, {"sin", Op::f_sin},
            {"cos", Op::f_cos}, {"sqrt", Op::f_sqrt}, {"abs", Op::f_abs},
            {"min", Op::f_min}, {"max", Op::f_max},
        };
        if (auto f = funcs.find(name); f != funcs.end()) {
            expect('(');
            int a = parse_expr();
            int b = -1;
            bool binary = f->second == Op::f_min || f->second == Op::f_max;
            if (binary) {
                expect(',');
                b = parse_expr();
            } else if (accept(',')) {
                throw SyntaxError("function takes one argument", pos_);
            }
            expect(')');
            return add_node({f->second, 0, 0, a, b});
        }
        if (auto v = kVars.find(name); v != kVars.end()) {
            Expression::Node n{Op::var, 0, v->second, -1, -1};
            return add_node(n);
        }
        throw UnknownIdentifier("unknown identifier '" + name + "'");
    }
};

Expression Expression::parse(const std::string& text) {
    return ExprParser(text).run();
}

double Expression::eval_node(int idx, const EvalEnv& env) const {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.op) {
        case Op::num: return n.value;
        case Op::var:
            switch (n.var) {
                case 0: return env.x.x;
                case 1: return env.x.y;
                case 2: return env.z;
                case 3: return env.p.x;
                case 4: return env.p.y;
                default: return env.x.x * env.x.x + env.x.y * env.x.y;
            }
        case Op::add: return eval_node(n.lhs, env) + eval_node(n.rhs, env);
        case Op::sub: return eval_node(n.lhs, env) - eval_node(n.rhs, env);
        case Op::mul: return eval_node(n.lhs, env) * eval_node(n.rhs, env);
        case Op::div: return eval_node(n.lhs, env) / eval_node(n.rhs, env);
        case Op::pow: return std::pow(eval_node(n.lhs, env), eval_node(n.rhs, env));
        case Op::neg: return -eval_node(n.lhs, env);
        case Op::f_exp: return std::exp(eval_node(n.lhs, env));
        case Op::f_log: return std::log(eval_node(n.lhs, env));
        case Op::f_sin: return std::sin(eval_node(n.lhs, env));
        case Op::f_cos: return std::cos(eval_node(n.lhs, env));
        case Op::f_sqrt: return std::sqrt(eval_node(n.lhs, env));
        case Op::f_abs: return std::abs(eval_node(n.lhs, env));
        case Op::f_min: return std::min(eval_node(n.lhs, env), eval_node(n.rhs, env));
        case Op::f_max: return std::max(eval_node(n.lhs, env), eval_node(n.rhs, env));
    }
    return 0.0;
}

double Expression::operator()(const EvalEnv& env) const {
    return eval_node(root_, env);
}

}  // namespace mate
