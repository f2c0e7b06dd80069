#pragma once

#include <memory>
#include <string>

namespace fairband {

// Minimal arithmetic over the variables t and s: constants, + - * /,
// unary minus, parentheses, and the calls max(a,b), exp(a), pow(a,b).
// Parsed once, evaluated many times; immutable and safe to share.
class Expr {
  public:
    Expr() = default;

    static Expr parse(const std::string& source);  // throws config_error with a caret position
    static Expr constant(double c);

    double eval(double t, double s) const;
    double operator()(double t, double s) const { return eval(t, s); }

    bool depends_on_s() const;
    bool depends_on_t() const;
    const std::string& source() const { return source_; }
    bool valid() const { return node_ != nullptr; }

    struct Node;  // exposed for the parser implementation

  private:
    std::shared_ptr<const Node> node_;
    std::string source_;
};

}  // namespace fairband
