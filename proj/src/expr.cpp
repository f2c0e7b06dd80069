#include "fairband/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "fairband/errors.hpp"

namespace fairband {

struct Expr::Node {
    enum class Op { constant, var_t, var_s, add, sub, mul, div, neg, fn_max, fn_exp, fn_pow };
    Op op;
    double c = 0.0;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double t, double s) const {
        switch (op) {
            case Op::constant: return c;
            case Op::var_t: return t;
            case Op::var_s: return s;
            case Op::add: return lhs->eval(t, s) + rhs->eval(t, s);
            case Op::sub: return lhs->eval(t, s) - rhs->eval(t, s);
            case Op::mul: return lhs->eval(t, s) * rhs->eval(t, s);
            case Op::div: return lhs->eval(t, s) / rhs->eval(t, s);
            case Op::neg: return -lhs->eval(t, s);
            case Op::fn_max: return std::max(lhs->eval(t, s), rhs->eval(t, s));
            case Op::fn_exp: return std::exp(lhs->eval(t, s));
            case Op::fn_pow: return std::pow(lhs->eval(t, s), rhs->eval(t, s));
        }
        return 0.0;
    }

    bool uses(Op var) const {
        if (op == var) return true;
        if (lhs && lhs->uses(var)) return true;
        if (rhs && rhs->uses(var)) return true;
        return false;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Op = Expr::Node::Op;

NodePtr make(Op op, NodePtr l = nullptr, NodePtr r = nullptr, double c = 0.0) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->c = c;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

// Recursive-descent parser:  expr := term (('+'|'-') term)*
//                            term := factor (('*'|'/') factor)*
//                            factor := '-' factor | primary
//                            primary := number | 't' | 's' | name '(' args ')' | '(' expr ')'
struct Parser {
    const std::string& src;
    std::size_t pos = 0;

    explicit Parser(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw config_error("expression error at position " + std::to_string(pos) + " in \"" +
                           src + "\": " + what);
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool consume(char c) {
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

    NodePtr parse_expr() {
        NodePtr node = parse_term();
        for (;;) {
            if (consume('+')) node = make(Op::add, node, parse_term());
            else if (consume('-')) node = make(Op::sub, node, parse_term());
            else return node;
        }
    }

    NodePtr parse_term() {
        NodePtr node = parse_factor();
        for (;;) {
            if (consume('*')) node = make(Op::mul, node, parse_factor());
            else if (consume('/')) node = make(Op::div, node, parse_factor());
            else return node;
        }
    }

    NodePtr parse_factor() {
        if (consume('-')) return make(Op::neg, parse_factor());
        if (consume('+')) return parse_factor();
        return parse_primary();
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of input");
        char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
        if (c == '(') {
            ++pos;
            NodePtr node = parse_expr();
            if (!consume(')')) fail("expected ')'");
            return node;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        const char* begin = src.c_str() + pos;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos += static_cast<std::size_t>(end - begin);
        return make(Op::constant, nullptr, nullptr, v);
    }

    NodePtr parse_name() {
        std::size_t start = pos;
        while (pos < src.size() && std::isalnum(static_cast<unsigned char>(src[pos]))) ++pos;
        std::string name = src.substr(start, pos - start);
        if (name == "t") return make(Op::var_t);
        if (name == "s") return make(Op::var_s);
        if (name == "exp") {
            auto args = parse_args(1);
            return make(Op::fn_exp, args.first);
        }
        if (name == "max") {
            auto args = parse_args(2);
            return make(Op::fn_max, args.first, args.second);
        }
        if (name == "pow") {
            auto args = parse_args(2);
            return make(Op::fn_pow, args.first, args.second);
        }
        pos = start;
        fail("unknown identifier '" + name + "'");
    }

    std::pair<NodePtr, NodePtr> parse_args(int count) {
        if (!consume('(')) fail("expected '(' after function name");
        NodePtr a = parse_expr();
        NodePtr b;
        if (count == 2) {
            if (!consume(',')) fail("expected ','");
            b = parse_expr();
        }
        if (!consume(')')) fail("expected ')'");
        return {a, b};
    }
};

}  // namespace

Expr Expr::parse(const std::string& source) {
    Parser p(source);
    Expr e;
    e.node_ = p.parse_expr();
    p.skip_ws();
    if (p.pos != source.size()) p.fail("trailing input");
    e.source_ = source;
    return e;
}

Expr Expr::constant(double c) {
    Expr e;
    e.node_ = make(Op::constant, nullptr, nullptr, c);
    e.source_ = std::to_string(c);
    return e;
}

double Expr::eval(double t, double s) const {
    return node_ ? node_->eval(t, s) : 0.0;
}

bool Expr::depends_on_s() const { return node_ && node_->uses(Op::var_s); }
bool Expr::depends_on_t() const { return node_ && node_->uses(Op::var_t); }

}  // namespace fairband
